"""
Core module for the crypto option pricing system
Contains interfaces, domain models, parameter sets and exceptions
"""

from .interfaces import IChainProcessor, IOptionPricer, IValidator
from .models import (
    CalibrationConfig,
    CalibrationResult,
    CosConfig,
    Cumulants,
    ErrorReport,
    MarketContext,
    McConfig,
    OptionChain,
    OptionQuote,
    OptionStyle,
    PricedQuote,
    RunConfig,
    TruncationRange,
    Violation,
    WeightScheme,
)
from .parameters import (
    BatesParams,
    BSParams,
    HestonParams,
    KouParams,
    MJDParams,
    ModelKind,
    ModelParams,
    VGParams,
)
from .exceptions import CryptoOptError, PricingError, ValidationError

__all__ = [
    'IChainProcessor',
    'IOptionPricer',
    'IValidator',
    'CalibrationConfig',
    'CalibrationResult',
    'CosConfig',
    'Cumulants',
    'ErrorReport',
    'MarketContext',
    'McConfig',
    'OptionChain',
    'OptionQuote',
    'OptionStyle',
    'PricedQuote',
    'RunConfig',
    'TruncationRange',
    'Violation',
    'WeightScheme',
    'BatesParams',
    'BSParams',
    'HestonParams',
    'KouParams',
    'MJDParams',
    'ModelKind',
    'ModelParams',
    'VGParams',
    'CryptoOptError',
    'PricingError',
    'ValidationError',
]
