"""
Custom exception classes for the crypto option pricing system
Defines specialized errors for pricing, calibration, simulation and data ingestion
"""


class CryptoOptError(Exception):
    """Base exception for the pricing system"""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(message)
        self.error_code = error_code or "CRYPTOPT_ERROR"
        self.details = details or {}


class ConfigurationError(CryptoOptError):
    """Exception raised for invalid configuration values"""
    pass


class ValidationError(CryptoOptError):
    """Exception raised when a chain or parameter set fails validation"""
    pass


class PricingError(CryptoOptError):
    """Base exception for pricer failures; calibration treats these as rejected points"""
    pass


class DomainError(PricingError):
    """Exception raised when pricer inputs violate their preconditions"""
    pass


class TruncationError(PricingError):
    """Exception raised when the Merton series tail bound is not met by the term cap"""
    pass


class RangeError(PricingError):
    """Exception raised when ln(K) falls outside the COS integration range"""
    pass


class DegenerateRangeError(PricingError):
    """Exception raised when cumulants give a zero-width integration range"""
    pass


class NumericalInstabilityError(PricingError):
    """Exception raised when the log characteristic function is not finite near zero"""
    pass


class SimulationError(CryptoOptError):
    """Base exception for Monte Carlo failures"""
    pass


class McConfigError(SimulationError):
    """Exception raised for invalid Monte Carlo configuration"""
    pass


class SeedExhaustionError(SimulationError):
    """Exception raised when a seed cannot provide the requested substreams"""
    pass


class CalibrationError(CryptoOptError):
    """Base exception for calibration failures"""
    pass


class InsufficientQuotesError(CalibrationError):
    """Exception raised when too few quotes remain to identify the parameters"""
    pass


class AllStartsFailedError(CalibrationError):
    """Exception raised when every multi-start ends on a rejected point"""
    pass


class ChainParseError(CryptoOptError):
    """Base exception for option chain file problems"""
    pass


class MissingColumnError(ChainParseError):
    """Exception raised when a required CSV column is absent"""
    pass


class RowParseError(ChainParseError):
    """Exception raised when a data row cannot be converted"""

    def __init__(self, line: int, message: str, **kwargs):
        super().__init__(message, **kwargs)
        self.line = line


class InconsistentContextError(ChainParseError):
    """Exception raised when rows disagree on futures level or rate"""

    def __init__(self, line: int, message: str, **kwargs):
        super().__init__(message, **kwargs)
        self.line = line


class EmptyFileError(ChainParseError):
    """Exception raised for files without data rows"""
    pass


class ParamsFileError(CryptoOptError):
    """Exception raised for malformed or mismatched calibration result files"""
    pass


class MetricsError(CryptoOptError):
    """Base exception for error-metric computation"""
    pass


class LengthMismatchError(MetricsError):
    """Exception raised when observed and predicted vectors differ in length or are empty"""
    pass


class MetricsDomainError(MetricsError):
    """Exception raised when a metric is evaluated outside its domain"""
    pass
