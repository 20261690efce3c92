"""
Pricing engines
Closed-form, Fourier-cosine and Monte Carlo pricers behind one interface
"""

from .analytic import AnalyticPricer, bs_call, bs_put, bs_vega, merton_call, merton_put
from .characteristic_functions import (
    CharFnHandle,
    cf_bates,
    cf_bs,
    cf_heston,
    cf_kou,
    cf_mjd,
    cf_vg,
    kou_drift,
    vg_omega,
)
from .fourier import CosPricer, cos_price, cos_prices, cumulants_numeric, truncation_range
from .monte_carlo import MonteCarloPricer, mc_martingale_check, mc_price, mc_prices
from .pricer_factory import create_pricer

__all__ = [
    'AnalyticPricer',
    'CosPricer',
    'MonteCarloPricer',
    'CharFnHandle',
    'create_pricer',
    'bs_call',
    'bs_put',
    'bs_vega',
    'merton_call',
    'merton_put',
    'cf_bs',
    'cf_vg',
    'cf_mjd',
    'cf_kou',
    'cf_heston',
    'cf_bates',
    'kou_drift',
    'vg_omega',
    'cumulants_numeric',
    'truncation_range',
    'cos_price',
    'cos_prices',
    'mc_price',
    'mc_prices',
    'mc_martingale_check',
]
