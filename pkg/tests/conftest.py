import numpy as np
import pytest

from cryptopt.core.models import MarketContext, OptionChain, OptionQuote, OptionStyle
from cryptopt.core.parameters import (
    BatesParams,
    BSParams,
    HestonParams,
    KouParams,
    MJDParams,
    ModelKind,
    VGParams,
    params_class,
)
from cryptopt.providers.pricer_factory import create_pricer


@pytest.fixture
def ctx():
    return MarketContext(spot=100.0, rate=0.02)


@pytest.fixture
def kou_params():
    return KouParams(sigma=0.3, lam=2.0, p=0.6, eta1=8.0, eta2=4.0)


@pytest.fixture
def representative_params():
    """One moderate parameter set per model"""
    return {
        ModelKind.BS: BSParams(sigma=0.6),
        ModelKind.MJD: MJDParams(sigma=0.4, lam=1.5, m=0.95, delta=0.3),
        ModelKind.VG: VGParams(sigma=0.6, theta=-0.2, nu=0.1),
        ModelKind.KOU: KouParams(sigma=0.4, lam=2.0, p=0.6, eta1=8.0, eta2=5.0),
        ModelKind.HESTON: HestonParams(kappa=2.0, theta_bar=0.3, sigma_v=0.6, rho=-0.3, v0=0.3),
        ModelKind.BATES: BatesParams(kappa=2.0, theta_bar=0.25, eta=0.5, rho=-0.2, v0=0.25,
                                     lam=1.0, alpha=-0.05, delta_j=0.2),
    }


def _draw(kind: ModelKind, rng: np.random.Generator):
    """Uniform over the whole calibration box, kept clear of open lower bounds"""
    cls = params_class(kind)
    lower, span = cls.lower_bounds(), cls.upper_bounds() - cls.lower_bounds()
    while True:
        params = cls.from_array(lower + span * rng.uniform(1e-3, 1.0, size=lower.size))
        if kind is not ModelKind.VG or params.martingale_base() > 0.05:
            return params


@pytest.fixture
def draw_params():
    """Random valid parameter sets for a model"""
    def draw(kind: ModelKind, count: int, seed: int = 7):
        rng = np.random.default_rng(seed)
        return [_draw(kind, rng) for _ in range(count)]
    return draw


@pytest.fixture
def make_chain():
    """Chain whose prices come from the given model's own pricer"""
    def build(params, ctx, tau, strikes, style=OptionStyle.CALL, label="Jun24"):
        prices = create_pricer(params, ctx).price_many(strikes, tau, style)
        quotes = tuple(
            OptionQuote(strike=float(k), maturity=tau, price=float(p), style=style, expiry_label=label)
            for k, p in zip(strikes, prices)
        )
        return OptionChain(context=ctx, quotes=quotes)
    return build
