"""
Data models for the crypto option pricing system
Defines market data structures, numerical configurations and result records
"""

import math
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .exceptions import ConfigurationError, McConfigError
from .parameters import REPORT_ORDER, ModelKind, ModelParams


class OptionStyle(Enum):
    """European payoff styles"""
    CALL = "call"
    PUT = "put"

    @classmethod
    def parse(cls, value: str) -> "OptionStyle":
        key = str(value).strip().lower()
        if key in ("call", "c"):
            return cls.CALL
        if key in ("put", "p"):
            return cls.PUT
        raise ValueError(f"Unknown option style: {value!r}")


class WeightScheme(Enum):
    """Weighting of squared pricing errors in the calibration objective"""
    UNIFORM = "uniform"
    INVERSE_SQUARED_PRICE = "invsq"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MarketContext:
    """Underlying futures level, risk-free rate and trade date shared by a chain"""
    spot: float
    rate: float
    trade_date: date = date(2024, 3, 11)

    def discount(self, tau: float) -> float:
        return math.exp(-self.rate * tau)

    def forward(self, tau: float) -> float:
        return self.spot * math.exp(self.rate * tau)


@dataclass(frozen=True)
class OptionQuote:
    """One market observation"""
    strike: float
    maturity: float
    price: float
    style: OptionStyle = OptionStyle.CALL
    expiry_label: str = ""


@dataclass(frozen=True)
class OptionChain:
    """Quotes for one underlying on one trade date"""
    context: MarketContext
    quotes: Tuple[OptionQuote, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "quotes", tuple(self.quotes))

    def __len__(self) -> int:
        return len(self.quotes)

    def expiry_labels(self) -> List[str]:
        """Expiry labels in order of first appearance"""
        return list(dict.fromkeys(q.expiry_label for q in self.quotes))

    def expiry_groups(self) -> Dict[str, Tuple[OptionQuote, ...]]:
        groups: Dict[str, List[OptionQuote]] = {}
        for quote in self.quotes:
            groups.setdefault(quote.expiry_label, []).append(quote)
        return {label: tuple(quotes) for label, quotes in groups.items()}

    def slice(self, expiry_label: str) -> Tuple[OptionQuote, ...]:
        return tuple(q for q in self.quotes if q.expiry_label == expiry_label)


@dataclass(frozen=True)
class Violation:
    """One broken chain invariant"""
    rule: str
    message: str
    quote_index: Optional[int] = None
    expiry_label: Optional[str] = None


@dataclass(frozen=True)
class CosConfig:
    """Fourier-cosine grid: number of terms and truncation width multiplier"""
    n_terms: int = 256
    trunc_mult: float = 10.0

    def __post_init__(self):
        n = self.n_terms
        if not isinstance(n, int) or n < 16 or n & (n - 1):
            raise ConfigurationError(
                f"n_terms must be a power of two >= 16, got {n!r}",
                error_code="COS_N_INVALID",
            )
        if not math.isfinite(self.trunc_mult) or self.trunc_mult < 4:
            raise ConfigurationError(
                f"trunc_mult must be >= 4, got {self.trunc_mult!r}",
                error_code="COS_L_INVALID",
            )


@dataclass(frozen=True)
class TruncationRange:
    """Log-price integration bounds [a, b]"""
    a: float
    b: float

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a < x < self.b


@dataclass(frozen=True)
class Cumulants:
    """First, second and fourth cumulants of the log-price"""
    c1: float
    c2: float
    c4: float


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo path count, time steps and seed"""
    n_paths: int = 1_000_000
    n_steps: int = 512
    seed: int = 20240311

    def __post_init__(self):
        if not isinstance(self.n_paths, int) or self.n_paths < 10_000:
            raise McConfigError(f"n_paths must be >= 10000, got {self.n_paths!r}", error_code="MC_PATHS_INVALID")
        if not isinstance(self.n_steps, int) or self.n_steps < 1:
            raise McConfigError(f"n_steps must be positive, got {self.n_steps!r}", error_code="MC_STEPS_INVALID")


@dataclass(frozen=True)
class CalibrationConfig:
    """Weighting, multi-start and stopping settings for calibration"""
    weights: WeightScheme = WeightScheme.UNIFORM
    custom_weights: Optional[Tuple[float, ...]] = None
    n_starts: int = 8
    tol_objective: float = 1e-12
    max_iters: int = 4000
    otm_only: bool = True
    seed: int = 20240311
    xatol: float = 1e-9

    def __post_init__(self):
        if self.custom_weights is not None:
            object.__setattr__(self, "custom_weights", tuple(float(w) for w in self.custom_weights))
        if self.weights is WeightScheme.CUSTOM:
            if not self.custom_weights:
                raise ConfigurationError("Custom weighting requires a weight list", error_code="WEIGHTS_MISSING")
            if any(not math.isfinite(w) or w < 0 for w in self.custom_weights):
                raise ConfigurationError("Custom weights must be finite and >= 0", error_code="WEIGHTS_NEGATIVE")
        if not isinstance(self.n_starts, int) or self.n_starts < 1:
            raise ConfigurationError(f"n_starts must be positive, got {self.n_starts!r}", error_code="STARTS_INVALID")
        if not self.tol_objective > 0:
            raise ConfigurationError("tol_objective must be positive", error_code="TOL_INVALID")
        if not isinstance(self.max_iters, int) or self.max_iters < 1:
            raise ConfigurationError("max_iters must be positive", error_code="MAX_ITERS_INVALID")


@dataclass(frozen=True)
class CalibrationResult:
    """Optimal parameters and diagnostics for one (model, expiry) calibration"""
    params: ModelParams
    objective: float
    converged: bool
    iterations: int
    expiry_label: str
    details: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def model(self) -> ModelKind:
        return self.params.kind


@dataclass(frozen=True)
class ErrorReport:
    """RMSE, MAE, MAPE and MSLE of model prices against market prices"""
    rmse: float
    mae: float
    mape: Optional[float]
    msle: float
    n: int
    scope: str = "all"


@dataclass(frozen=True)
class RunConfig:
    """Settings for one command-line run"""
    input_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    model: str = "all"
    rate: Optional[float] = None
    cos: CosConfig = field(default_factory=CosConfig)
    calibration: CalibrationConfig = field(default_factory=CalibrationConfig)
    mc: Optional[McConfig] = None
    max_workers: int = 4

    def models(self) -> List[ModelKind]:
        if self.model == "all":
            return list(REPORT_ORDER)
        return [ModelKind.parse(self.model)]

    def check_paths(self) -> List[str]:
        """Paths that must exist at run time but do not"""
        missing = []
        if self.input_path is not None and not Path(self.input_path).exists():
            missing.append(str(self.input_path))
        return missing


@dataclass(frozen=True)
class PricedQuote:
    """Market and model price of one quote"""
    expiry_label: str
    strike: float
    market_price: float
    model_price: float
    abs_error: float
    rel_error: float
