from datetime import date

import numpy as np
import pytest

from cryptopt.core.exceptions import ConfigurationError
from cryptopt.core.models import MarketContext, OptionStyle
from cryptopt.core.parameters import BSParams, ModelKind
from cryptopt.processors.fixture_generator import (
    PRESETS,
    expiry_date,
    fixture_spec,
    generate_chain,
    preset,
    year_fraction,
)
from cryptopt.providers.analytic import bs_call

TRADE_DATE = date(2024, 3, 11)


@pytest.mark.parametrize("label,expected", [
    ("Jun24", date(2024, 6, 28)),
    ("Dec24", date(2024, 12, 27)),
    ("Mar25", date(2025, 3, 28)),
    ("Dec25", date(2025, 12, 26)),
])
def test_last_friday(label, expected):
    assert expiry_date(label) == expected
    assert expected.weekday() == 4


def test_invalid_label():
    with pytest.raises(ConfigurationError):
        expiry_date("2024-06")


def test_act_365():
    assert year_fraction(TRADE_DATE, date(2024, 6, 28)) == pytest.approx(109 / 365)


def test_noiseless_prices_are_model_prices():
    spec = fixture_spec(BSParams(sigma=0.8), spot=60000.0, rate=0.05, expiries=("Jun24",), trade_date=TRADE_DATE)
    chain = generate_chain(spec, seed=0)
    ctx = MarketContext(spot=60000.0, rate=0.05)
    tau = 109 / 365
    for quote in chain.quotes:
        assert quote.maturity == pytest.approx(tau)
        assert quote.price == pytest.approx(bs_call(ctx, 0.8, quote.strike, tau), rel=1e-12)


def test_noise_is_seeded():
    spec = fixture_spec(BSParams(sigma=0.8), spot=60000.0, noise=0.02, trade_date=TRADE_DATE)
    assert generate_chain(spec, seed=3) == generate_chain(spec, seed=3)
    assert generate_chain(spec, seed=3) != generate_chain(spec, seed=4)


def test_strike_step_rounds_the_grid():
    spec = fixture_spec(BSParams(sigma=0.8), spot=71234.0, expiries=("Jun24",), strike_step=1000.0,
                        trade_date=TRADE_DATE)
    strikes = np.array([q.strike for q in generate_chain(spec, seed=0).quotes])
    assert np.all(strikes % 1000.0 == 0)
    assert np.all(np.diff(strikes) > 0)


def test_btc_preset():
    spec = preset("btc-kou")
    assert spec.params.kind is ModelKind.KOU
    assert spec is PRESETS["btc-kou"]
    chain = generate_chain(spec, seed=1)
    assert chain.expiry_labels() == list(spec.expiries)
    maturities = [chain.slice(label)[0].maturity for label in spec.expiries]
    assert np.all(np.diff(maturities) > 0)
    assert all(q.style is OptionStyle.CALL and q.price > 0 for q in chain.quotes)


def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        preset("eth-vg")


def test_expiry_before_trade_date():
    spec = fixture_spec(BSParams(sigma=0.8), spot=100.0, expiries=("Jan24",), trade_date=TRADE_DATE)
    with pytest.raises(ConfigurationError):
        generate_chain(spec, seed=0)
