"""
Model parameter sets
Tagged union of the six models' parameter vectors with their calibration boxes
"""

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import ClassVar, Dict, List, Mapping, Tuple, Type

import numpy as np

from .exceptions import ParamsFileError


class ModelKind(Enum):
    """Supported pricing models"""
    BS = "bs"
    VG = "vg"
    MJD = "mjd"
    KOU = "kou"
    HESTON = "heston"
    BATES = "bates"

    @property
    def label(self) -> str:
        """Row label used in rendered error tables"""
        return _TABLE_LABELS[self]

    @classmethod
    def parse(cls, value: str) -> "ModelKind":
        """Resolve a model tag such as 'kou' or 'SVJ'"""
        key = str(value).strip().lower()
        if key == "svj":
            key = "bates"
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"Unknown model tag: {value!r}")


_TABLE_LABELS = {
    ModelKind.BS: "BS",
    ModelKind.HESTON: "Heston",
    ModelKind.KOU: "Kou",
    ModelKind.MJD: "MJD",
    ModelKind.BATES: "SVJ",
    ModelKind.VG: "VG",
}

# Row order of the rendered error tables
REPORT_ORDER: Tuple[ModelKind, ...] = (
    ModelKind.BS,
    ModelKind.HESTON,
    ModelKind.KOU,
    ModelKind.MJD,
    ModelKind.BATES,
    ModelKind.VG,
)


@dataclass(frozen=True)
class ParamBound:
    """Box constraint for one parameter"""
    low: float
    high: float
    low_inclusive: bool = False
    high_inclusive: bool = True

    def contains(self, value: float) -> bool:
        if not math.isfinite(value):
            return False
        above = value >= self.low if self.low_inclusive else value > self.low
        below = value <= self.high if self.high_inclusive else value < self.high
        return above and below

    def describe(self) -> str:
        left = "[" if self.low_inclusive else "("
        right = "]" if self.high_inclusive else ")"
        return f"{left}{self.low:g}, {self.high:g}{right}"


def _open_closed(low: float, high: float) -> ParamBound:
    return ParamBound(low, high, low_inclusive=False, high_inclusive=True)


def _closed(low: float, high: float) -> ParamBound:
    return ParamBound(low, high, low_inclusive=True, high_inclusive=True)


# Serialized names that differ from the attribute names
_EXTERNAL_NAMES = {"lam": "lambda"}
_INTERNAL_NAMES = {v: k for k, v in _EXTERNAL_NAMES.items()}


@dataclass(frozen=True)
class ModelParams:
    """Base class for a model's parameter vector"""

    kind: ClassVar[ModelKind]
    BOUNDS: ClassVar[Dict[str, ParamBound]]
    # moderate values that price everywhere; rejected starts are pulled toward them
    ANCHOR: ClassVar[Dict[str, float]]

    @classmethod
    def names(cls) -> Tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    @classmethod
    def anchor(cls) -> "ModelParams":
        return cls(**cls.ANCHOR)

    @classmethod
    def dimension(cls) -> int:
        return len(cls.BOUNDS)

    @classmethod
    def lower_bounds(cls) -> np.ndarray:
        return np.array([cls.BOUNDS[name].low for name in cls.names()], dtype=float)

    @classmethod
    def upper_bounds(cls) -> np.ndarray:
        return np.array([cls.BOUNDS[name].high for name in cls.names()], dtype=float)

    @classmethod
    def from_array(cls, values) -> "ModelParams":
        values = np.asarray(values, dtype=float).ravel()
        if values.size != cls.dimension():
            raise ValueError(
                f"{cls.__name__} expects {cls.dimension()} values, got {values.size}"
            )
        return cls(**{name: float(v) for name, v in zip(cls.names(), values)})

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.names()], dtype=float)

    def as_dict(self) -> Dict[str, float]:
        """Parameter name to value map using the serialized names"""
        return {_EXTERNAL_NAMES.get(name, name): float(getattr(self, name)) for name in self.names()}

    def bound_violations(self) -> List[str]:
        """Describe every field outside its calibration box"""
        issues = []
        for name in self.names():
            value = float(getattr(self, name))
            bound = self.BOUNDS[name]
            if not bound.contains(value):
                issues.append(
                    f"{self.kind.value}.{_EXTERNAL_NAMES.get(name, name)}={value!r} "
                    f"outside {bound.describe()}"
                )
        return issues

    def is_valid(self) -> bool:
        return not self.bound_violations()


@dataclass(frozen=True)
class BSParams(ModelParams):
    """Black-Scholes volatility"""
    sigma: float

    kind: ClassVar[ModelKind] = ModelKind.BS
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {"sigma": _open_closed(0.0, 5.0)}
    ANCHOR: ClassVar[Dict[str, float]] = {"sigma": 0.8}


@dataclass(frozen=True)
class VGParams(ModelParams):
    """Variance Gamma volatility, skewness and kurtosis"""
    sigma: float
    theta: float
    nu: float

    kind: ClassVar[ModelKind] = ModelKind.VG
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {
        "sigma": _open_closed(0.0, 5.0),
        "theta": _closed(-3.0, 3.0),
        "nu": _open_closed(0.0, 5.0),
    }
    ANCHOR: ClassVar[Dict[str, float]] = {"sigma": 0.6, "theta": -0.1, "nu": 0.2}

    def martingale_base(self) -> float:
        """1 - theta*nu - sigma^2*nu/2, which must stay positive"""
        return 1.0 - self.theta * self.nu - 0.5 * self.sigma ** 2 * self.nu


@dataclass(frozen=True)
class MJDParams(ModelParams):
    """Merton jump diffusion; m is the mean jump multiplier E[y]"""
    sigma: float
    lam: float
    m: float
    delta: float

    kind: ClassVar[ModelKind] = ModelKind.MJD
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {
        "sigma": _open_closed(0.0, 5.0),
        "lam": _closed(0.0, 25.0),
        "m": _open_closed(0.0, 3.0),
        "delta": _open_closed(0.0, 3.0),
    }
    ANCHOR: ClassVar[Dict[str, float]] = {"sigma": 0.6, "lam": 1.0, "m": 1.0, "delta": 0.2}

    @property
    def jump_log_mean(self) -> float:
        return math.log(self.m) - 0.5 * self.delta ** 2


@dataclass(frozen=True)
class KouParams(ModelParams):
    """Kou double exponential jump diffusion"""
    sigma: float
    lam: float
    p: float
    eta1: float
    eta2: float

    kind: ClassVar[ModelKind] = ModelKind.KOU
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {
        "sigma": _open_closed(0.0, 5.0),
        "lam": _closed(0.0, 25.0),
        "p": _closed(0.0, 1.0),
        "eta1": _open_closed(1.0, 50.0),
        "eta2": _open_closed(0.0, 50.0),
    }
    ANCHOR: ClassVar[Dict[str, float]] = {"sigma": 0.6, "lam": 1.0, "p": 0.5, "eta1": 10.0, "eta2": 5.0}


@dataclass(frozen=True)
class HestonParams(ModelParams):
    """Heston stochastic volatility"""
    kappa: float
    theta_bar: float
    sigma_v: float
    rho: float
    v0: float

    kind: ClassVar[ModelKind] = ModelKind.HESTON
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {
        "kappa": _open_closed(0.0, 50.0),
        "theta_bar": _open_closed(0.0, 4.0),
        "sigma_v": _open_closed(0.0, 100.0),
        "rho": _closed(-1.0, 1.0),
        "v0": _open_closed(0.0, 4.0),
    }
    ANCHOR: ClassVar[Dict[str, float]] = {"kappa": 2.0, "theta_bar": 0.5, "sigma_v": 1.0, "rho": -0.3, "v0": 0.5}

    def feller_satisfied(self) -> bool:
        """2*kappa*theta_bar >= sigma_v^2 (reported only, never enforced)"""
        return 2.0 * self.kappa * self.theta_bar >= self.sigma_v ** 2


@dataclass(frozen=True)
class BatesParams(ModelParams):
    """Heston variance dynamics with log-normal jumps (SVJ)"""
    kappa: float
    theta_bar: float
    eta: float
    rho: float
    v0: float
    lam: float
    alpha: float
    delta_j: float

    kind: ClassVar[ModelKind] = ModelKind.BATES
    BOUNDS: ClassVar[Dict[str, ParamBound]] = {
        "kappa": _open_closed(0.0, 50.0),
        "theta_bar": _open_closed(0.0, 4.0),
        "eta": _open_closed(0.0, 100.0),
        "rho": _closed(-1.0, 1.0),
        "v0": _open_closed(0.0, 4.0),
        "lam": _closed(0.0, 25.0),
        "alpha": _closed(-2.0, 2.0),
        "delta_j": _open_closed(0.0, 3.0),
    }
    ANCHOR: ClassVar[Dict[str, float]] = {
        "kappa": 2.0, "theta_bar": 0.5, "eta": 1.0, "rho": -0.3, "v0": 0.5,
        "lam": 1.0, "alpha": 0.0, "delta_j": 0.2,
    }

    @property
    def jump_compensator(self) -> float:
        """Mean relative jump size e^(alpha + delta_j^2/2) - 1"""
        return math.expm1(self.alpha + 0.5 * self.delta_j ** 2)

    def heston_part(self) -> HestonParams:
        return HestonParams(
            kappa=self.kappa,
            theta_bar=self.theta_bar,
            sigma_v=self.eta,
            rho=self.rho,
            v0=self.v0,
        )


PARAMS_BY_KIND: Dict[ModelKind, Type[ModelParams]] = {
    cls.kind: cls
    for cls in (BSParams, VGParams, MJDParams, KouParams, HestonParams, BatesParams)
}


def params_class(kind: ModelKind) -> Type[ModelParams]:
    return PARAMS_BY_KIND[kind]


def params_from_dict(model: str, values: Mapping[str, float]) -> ModelParams:
    """Build a parameter set from a model tag and a serialized name->value map"""
    try:
        kind = ModelKind.parse(model)
    except ValueError as e:
        raise ParamsFileError(str(e), error_code="UNKNOWN_MODEL_TAG", details={"model": model})

    cls = PARAMS_BY_KIND[kind]
    renamed = {_INTERNAL_NAMES.get(k, k): v for k, v in values.items()}
    expected = set(cls.names())
    if set(renamed) != expected:
        raise ParamsFileError(
            f"Parameters for {kind.value} must be {sorted(_EXTERNAL_NAMES.get(n, n) for n in expected)}, "
            f"got {sorted(values)}",
            error_code="PARAMS_MISMATCH",
            details={"model": kind.value},
        )
    try:
        return cls(**{name: float(renamed[name]) for name in cls.names()})
    except (TypeError, ValueError) as e:
        raise ParamsFileError(f"Non-numeric parameter for {kind.value}: {e}", error_code="PARAMS_NOT_NUMERIC")
