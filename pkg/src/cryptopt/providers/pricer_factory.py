"""
Pricer selection
Closed forms for Black-Scholes and Merton, the cosine expansion for the rest
"""

from ..core.interfaces import IOptionPricer
from ..core.models import CosConfig, MarketContext
from ..core.parameters import ModelKind, ModelParams
from .analytic import AnalyticPricer
from .fourier import CosPricer

CLOSED_FORM_MODELS = (ModelKind.BS, ModelKind.MJD)


def create_pricer(params: ModelParams, ctx: MarketContext, cos_cfg: CosConfig = None) -> IOptionPricer:
    if params.kind in CLOSED_FORM_MODELS:
        return AnalyticPricer(params, ctx)
    return CosPricer(params, ctx, cos_cfg)
