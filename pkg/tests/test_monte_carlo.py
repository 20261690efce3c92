import math

import numpy as np
import pytest

from cryptopt.core.exceptions import DomainError, McConfigError, SeedExhaustionError
from cryptopt.core.models import CosConfig, MarketContext, McConfig, OptionStyle
from cryptopt.core.parameters import BSParams, HestonParams, KouParams, ModelKind, VGParams
from cryptopt.providers.analytic import bs_call
from cryptopt.providers.monte_carlo import (
    MonteCarloPricer,
    mc_martingale_check,
    mc_price,
    mc_prices,
)
from cryptopt.providers.pricer_factory import create_pricer

SMALL = McConfig(n_paths=50_000, n_steps=64, seed=17)


def test_same_seed_is_bit_identical(ctx, kou_params):
    first = mc_prices(kou_params, ctx, [90.0, 110.0], 0.5, cfg=SMALL)
    second = mc_prices(kou_params, ctx, [90.0, 110.0], 0.5, cfg=SMALL)
    np.testing.assert_array_equal(first[0], second[0])
    np.testing.assert_array_equal(first[1], second[1])


def test_threads_do_not_change_results(ctx):
    params = HestonParams(kappa=2.0, theta_bar=0.2, sigma_v=0.5, rho=-0.5, v0=0.2)
    serial = mc_price(params, ctx, 100.0, 0.5, cfg=SMALL, max_workers=1)
    threaded = mc_price(params, ctx, 100.0, 0.5, cfg=SMALL, max_workers=4)
    assert serial == threaded


def test_different_seeds_differ(ctx):
    params = BSParams(sigma=0.5)
    a = mc_price(params, ctx, 100.0, 1.0, cfg=McConfig(n_paths=20_000, seed=1))
    b = mc_price(params, ctx, 100.0, 1.0, cfg=McConfig(n_paths=20_000, seed=2))
    assert a[0] != b[0]


def test_degenerate_volatility_has_zero_error():
    ctx = MarketContext(spot=100.0, rate=0.0)
    price, std_error = mc_price(BSParams(sigma=1e-300), ctx, 90.0, 1.0, cfg=McConfig(n_paths=20_000, seed=3))
    assert std_error == 0.0
    assert price == pytest.approx(10.0, abs=1e-12)


def test_halving_paths_inflates_error():
    """Standard error grows by about sqrt(2) when the path count halves"""
    ctx = MarketContext(spot=100.0, rate=0.0)
    params = BSParams(sigma=0.6)
    for seed in range(10):
        _, full = mc_price(params, ctx, 100.0, 1.0, cfg=McConfig(n_paths=40_000, seed=seed))
        _, half = mc_price(params, ctx, 100.0, 1.0, cfg=McConfig(n_paths=20_000, seed=seed))
        assert 1.2 <= half / full <= 1.7


@pytest.mark.parametrize("seed", [-1, 2 ** 64, 1.5, True])
def test_invalid_seed(ctx, seed):
    with pytest.raises(SeedExhaustionError):
        mc_price(BSParams(sigma=0.3), ctx, 100.0, 1.0, cfg=McConfig(n_paths=10_000, seed=seed))


def test_stochastic_vol_needs_enough_steps(ctx):
    params = HestonParams(kappa=2.0, theta_bar=0.2, sigma_v=0.5, rho=-0.5, v0=0.2)
    with pytest.raises(McConfigError):
        mc_price(params, ctx, 100.0, 1.0, cfg=McConfig(n_paths=10_000, n_steps=32))


def test_too_few_paths():
    with pytest.raises(McConfigError):
        McConfig(n_paths=100)


def test_invalid_params_and_strikes(ctx):
    with pytest.raises(DomainError):
        mc_price(BSParams(sigma=-0.1), ctx, 100.0, 1.0, cfg=SMALL)
    with pytest.raises(DomainError):
        mc_prices(BSParams(sigma=0.3), ctx, [100.0, 0.0], 1.0, cfg=SMALL)
    with pytest.raises(DomainError):
        mc_price(VGParams(sigma=2.0, theta=1.0, nu=2.0), ctx, 100.0, 1.0, cfg=SMALL)


@pytest.mark.parametrize("kind", list(ModelKind))
def test_martingale_check(ctx, representative_params, kind):
    mean, std_error = mc_martingale_check(representative_params[kind], ctx, 0.5,
                                          cfg=McConfig(n_paths=65_536, n_steps=128, seed=5))
    assert abs(mean - 1.0) < 4 * std_error + 1e-3
    assert std_error < 0.01


def test_pricer_keeps_last_errors(ctx):
    pricer = MonteCarloPricer(BSParams(sigma=0.4), ctx, SMALL)
    prices = pricer.price_many([95.0, 105.0], 0.5, OptionStyle.PUT)
    assert prices.shape == (2,)
    assert pricer.last_std_errors.shape == (2,)
    assert np.all(pricer.last_std_errors > 0)


@pytest.mark.slow
def test_bs_reference_within_three_errors():
    ctx = MarketContext(spot=100.0, rate=0.0)
    price, std_error = mc_price(BSParams(sigma=0.2), ctx, 100.0, 1.0, cfg=McConfig(n_paths=1_000_000, seed=11),
                                max_workers=4)
    assert abs(price - bs_call(ctx, 0.2, 100.0, 1.0)) <= 3 * std_error


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(ModelKind))
def test_fourier_prices_inside_simulation_band(representative_params, kind):
    """ATM and two OTM strikes against the Fourier pricer"""
    ctx = MarketContext(spot=100.0, rate=0.02)
    params = representative_params[kind]
    tau = 0.5
    strikes = [100.0, 120.0]
    cfg = McConfig(n_paths=1_000_000, n_steps=round(512 * tau), seed=20240311)
    calls, call_errors = mc_prices(params, ctx, strikes, tau, OptionStyle.CALL, cfg, max_workers=4)
    put, put_error = mc_price(params, ctx, 80.0, tau, OptionStyle.PUT, cfg, max_workers=4)

    pricer = create_pricer(params, ctx, CosConfig())
    reference = pricer.price_many(strikes, tau, OptionStyle.CALL)
    assert np.all(np.abs(calls - reference) <= 3 * call_errors)
    assert abs(put - pricer.price(80.0, tau, OptionStyle.PUT)) <= 3 * put_error


@pytest.mark.slow
def test_kou_reported_parameters_against_fourier():
    ctx = MarketContext(spot=70000.0, rate=0.05)
    params = KouParams(sigma=0.6, lam=3.0, p=0.7, eta1=7.5, eta2=2.0)
    price, std_error = mc_price(params, ctx, 70000.0, 0.25, cfg=McConfig(n_paths=1_000_000, seed=9), max_workers=4)
    assert abs(price - create_pricer(params, ctx).price(70000.0, 0.25)) <= 3 * std_error
