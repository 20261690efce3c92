"""
Orchestration module
Per-maturity calibration and the chain-level workflow coordinator
"""

from .calibration import calibrate, filter_otm, latin_hypercube_starts, model_prices, objective, quote_weights
from .pricing_orchestrator import McComparison, PricedSlice, PricingOrchestrator

__all__ = [
    'calibrate',
    'filter_otm',
    'latin_hypercube_starts',
    'model_prices',
    'objective',
    'quote_weights',
    'McComparison',
    'PricedSlice',
    'PricingOrchestrator'
]
