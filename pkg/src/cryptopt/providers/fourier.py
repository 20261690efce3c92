"""
Fourier-cosine pricer
Prices European options from any characteristic function by a cosine expansion
of the log-price density over a cumulant-based truncation range
"""

import logging
import math
from dataclasses import replace
from typing import Sequence

import numpy as np

from ..config.settings import Config
from ..core.exceptions import DegenerateRangeError, NumericalInstabilityError, RangeError
from ..core.interfaces import IOptionPricer
from ..core.models import CosConfig, Cumulants, MarketContext, OptionStyle, TruncationRange
from ..core.parameters import ModelKind, ModelParams
from .characteristic_functions import CharFnHandle

logger = logging.getLogger(__name__)

CUMULANT_STEP = 1e-3
# h^4 in the fourth-difference denominator amplifies roundoff, so c4 uses a wider stencil
FOURTH_CUMULANT_STEP_FACTOR = 10.0
CONVERGENCE_RATIO = 1e-8
# parity prices are exact only to about this fraction of S0
PRICE_FLOOR_FRACTION = 1e-12


def _central_log_cf(cf: CharFnHandle, tau: float, u: np.ndarray) -> np.ndarray:
    """ln phi(u) of the log-return X - ln S0"""
    shift = math.log(cf.ctx.spot)
    with np.errstate(all="ignore"):
        values = np.asarray(cf(u, tau), dtype=complex) * np.exp(-1j * u * shift)
        if not np.all(np.isfinite(values)) or np.any(values == 0):
            raise NumericalInstabilityError(
                "Characteristic function is not finite and nonzero near u = 0",
                error_code="CUMULANTS_UNSTABLE",
                details={"model": cf.kind.value, "tau": tau},
            )
        logs = np.log(values)
    if not np.all(np.isfinite(logs)):
        raise NumericalInstabilityError("ln phi is not finite near u = 0", error_code="CUMULANTS_UNSTABLE")
    return logs


def cumulants_numeric(cf: CharFnHandle, tau: float, h: float = CUMULANT_STEP) -> Cumulants:
    """
    Cumulants of ln S_tau from central differences of ln phi at u = 0 with one
    Richardson step (h and 2h).
    """
    h4 = FOURTH_CUMULANT_STEP_FACTOR * h
    offsets = np.array([1.0, 2.0, 4.0])
    grid = np.concatenate([h * offsets, -h * offsets, h4 * offsets, -h4 * offsets])
    logs = _central_log_cf(cf, tau, grid)
    pos, neg = logs[0:3], logs[3:6]
    pos4, neg4 = logs[6:9], logs[9:12]

    def first(i, step):
        return (pos[i] - neg[i]) / (2.0 * step)

    def second(i, step):
        return (pos[i] + neg[i]) / step ** 2

    def fourth(i, j, step):
        return (pos4[j] - 4.0 * pos4[i] - 4.0 * neg4[i] + neg4[j]) / step ** 4

    d1 = (4.0 * first(0, h) - first(1, 2 * h)) / 3.0
    d2 = (4.0 * second(0, h) - second(1, 2 * h)) / 3.0
    d4 = (4.0 * fourth(0, 1, h4) - fourth(1, 2, 2 * h4)) / 3.0

    c1 = float(d1.imag) + math.log(cf.ctx.spot)
    c2 = max(float(-d2.real), 0.0)
    c4 = max(float(d4.real), 0.0)
    return Cumulants(c1=c1, c2=c2, c4=c4)


def truncation_range(cumulants: Cumulants, trunc_mult: float) -> TruncationRange:
    """[c1 - L sqrt(c2 + sqrt(c4)), c1 + L sqrt(c2 + sqrt(c4))]"""
    spread = cumulants.c2 + math.sqrt(max(cumulants.c4, 0.0))
    if not spread > 0:
        raise DegenerateRangeError(
            "Zero variance and zero fourth cumulant give an empty integration range",
            error_code="COS_RANGE_DEGENERATE",
        )
    half_width = trunc_mult * math.sqrt(spread)
    return TruncationRange(a=cumulants.c1 - half_width, b=cumulants.c1 + half_width)


def effective_cos_config(params: ModelParams, cfg: CosConfig) -> CosConfig:
    """Widen the range for heavy-tailed parameter regions"""
    wide = Config.COS_TRUNC_MULT_FAT_TAIL
    if cfg.trunc_mult >= wide:
        return cfg
    if params.kind is ModelKind.VG and params.nu > Config.FAT_TAIL_VG_NU:
        return replace(cfg, trunc_mult=wide)
    if params.kind in (ModelKind.MJD, ModelKind.KOU, ModelKind.BATES) and params.lam >= Config.FAT_TAIL_JUMP_INTENSITY:
        return replace(cfg, trunc_mult=wide)
    return cfg


def _put_coefficients(rng: TruncationRange, log_strikes: np.ndarray, strikes: np.ndarray, n_terms: int) -> np.ndarray:
    """V_k for (K - e^x)^+ on [a, ln K]; rows are terms, columns strikes"""
    a, b = rng.a, rng.b
    k = np.arange(n_terms, dtype=float)[:, None]
    w = k * math.pi / (b - a)
    lower = a
    upper = log_strikes[None, :]

    cos_up, sin_up = np.cos(w * (upper - a)), np.sin(w * (upper - a))
    cos_lo, sin_lo = np.cos(w * (lower - a)), np.sin(w * (lower - a))

    chi = (
        cos_up * np.exp(upper) - cos_lo * math.exp(lower)
        + w * sin_up * np.exp(upper) - w * sin_lo * math.exp(lower)
    ) / (1.0 + w ** 2)

    psi = np.empty_like(chi)
    psi[0, :] = upper[0] - lower
    psi[1:, :] = (sin_up[1:, :] - sin_lo[1:, :]) / w[1:, :]

    return 2.0 / (b - a) * (strikes[None, :] * psi - chi)


def cos_prices(cf: CharFnHandle, strikes: Sequence[float], tau: float,
               style: OptionStyle, cfg: CosConfig) -> np.ndarray:
    """Vectorised COS prices for strikes sharing one maturity"""
    strikes = np.atleast_1d(np.asarray(strikes, dtype=float))
    if np.any(~np.isfinite(strikes)) or np.any(strikes <= 0):
        raise RangeError("Strikes must be positive", error_code="COS_STRIKE_INVALID")

    rng = truncation_range(cumulants_numeric(cf, tau), cfg.trunc_mult)
    log_strikes = np.log(strikes)
    outside = ~((log_strikes > rng.a) & (log_strikes < rng.b))
    if np.any(outside):
        raise RangeError(
            f"ln(K) outside COS range ({rng.a:.4f}, {rng.b:.4f}) for strikes {strikes[outside].tolist()}",
            error_code="COS_STRIKE_OUT_OF_RANGE",
            details={"a": rng.a, "b": rng.b},
        )

    u = np.arange(cfg.n_terms, dtype=float) * math.pi / rng.width
    with np.errstate(all="ignore"):
        weights = np.real(np.asarray(cf(u, tau), dtype=complex) * np.exp(-1j * u * rng.a))
    weights[0] *= 0.5

    discount = math.exp(-cf.ctx.rate * tau)
    terms = weights[:, None] * _put_coefficients(rng, log_strikes, strikes, cfg.n_terms)
    puts = discount * terms.sum(axis=0)

    if not np.all(np.isfinite(puts)):
        raise RangeError("COS expansion produced non-finite prices", error_code="COS_NOT_FINITE")

    # Calls from put-call parity; the model forward equals S0 e^{r tau} exactly
    if style is OptionStyle.CALL:
        values = np.maximum(puts + cf.ctx.spot - strikes * discount, 0.0)
    else:
        values = np.maximum(puts, 0.0)

    ratio = tail_ratio(discount * np.abs(terms[-1, :]), values, cf.ctx.spot)
    if np.any(ratio > CONVERGENCE_RATIO):
        logger.warning(
            "COS series not converged for %s %s at tau=%.4f (N=%d): last term/price up to %.3g",
            cf.kind.value, style.value, tau, cfg.n_terms, float(np.max(ratio)),
        )
    return values


def tail_ratio(tail: np.ndarray, prices: np.ndarray, spot: float) -> np.ndarray:
    """Last retained term over the returned price, with prices floored at parity roundoff"""
    return tail / np.maximum(np.abs(prices), PRICE_FLOOR_FRACTION * spot)


def cos_price(cf: CharFnHandle, strike: float, tau: float,
              style: OptionStyle = OptionStyle.CALL, cfg: CosConfig = None) -> float:
    """Single-strike COS price"""
    return float(cos_prices(cf, [strike], tau, style, cfg or CosConfig())[0])


class CosPricer(IOptionPricer):
    """Characteristic-function pricer for any of the six models"""

    def __init__(self, params: ModelParams, ctx: MarketContext, cfg: CosConfig = None):
        self.params = params
        self.ctx = ctx
        self.cfg = effective_cos_config(params, cfg or CosConfig())
        self.charfn = CharFnHandle(params, ctx)

    def supports_model(self, kind: ModelKind) -> bool:
        return True

    def price(self, strike: float, tau: float, style: OptionStyle = OptionStyle.CALL) -> float:
        return float(self.price_many([strike], tau, style)[0])

    def price_many(self, strikes: Sequence[float], tau: float, style: OptionStyle = OptionStyle.CALL) -> np.ndarray:
        return cos_prices(self.charfn, strikes, tau, style, self.cfg)
