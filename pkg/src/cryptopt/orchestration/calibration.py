"""
Per-maturity calibration
Weighted least squares over one expiry's quotes, minimised by bounded
Nelder-Mead from seeded Latin-hypercube starts in the unit box
"""

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from ..config.settings import Config
from ..core.exceptions import (
    AllStartsFailedError,
    ConfigurationError,
    InsufficientQuotesError,
    PricingError,
    TruncationError,
)
from ..core.models import (
    CalibrationConfig,
    CalibrationResult,
    CosConfig,
    MarketContext,
    OptionQuote,
    OptionStyle,
    WeightScheme,
)
from ..core.parameters import ModelKind, ModelParams, params_class
from ..providers.pricer_factory import create_pricer

logger = logging.getLogger(__name__)

START_BATCH = 8
SIMPLEX_DIAMETER_TOL = 1e-6
START_REPAIR_HALVINGS = 20


def filter_otm(chain_slice: Sequence[OptionQuote], ctx: MarketContext) -> Tuple[OptionQuote, ...]:
    """Calls struck above spot and puts struck below it, in input order"""
    return tuple(q for q in chain_slice if _is_otm(q, ctx.spot))


def _is_otm(quote: OptionQuote, spot: float) -> bool:
    if quote.style is OptionStyle.CALL:
        return quote.strike > spot
    return quote.strike < spot


def quote_weights(chain_slice: Sequence[OptionQuote], cfg: CalibrationConfig) -> np.ndarray:
    """omega_j for each quote of the slice"""
    n = len(chain_slice)
    if cfg.weights is WeightScheme.UNIFORM:
        return np.ones(n)
    if cfg.weights is WeightScheme.INVERSE_SQUARED_PRICE:
        prices = np.array([q.price for q in chain_slice], dtype=float)
        if np.any(prices <= 0):
            raise ConfigurationError(
                "inverse squared price weights need every price above zero",
                error_code="WEIGHTS_ZERO_PRICE",
            )
        return 1.0 / prices ** 2
    weights = np.asarray(cfg.custom_weights, dtype=float)
    if weights.size != n:
        raise ConfigurationError(
            f"custom weights have {weights.size} entries for {n} quotes",
            error_code="WEIGHTS_LENGTH",
        )
    return weights


def model_prices(params: ModelParams, chain_slice: Sequence[OptionQuote], ctx: MarketContext,
                 cos_cfg: CosConfig = None) -> np.ndarray:
    """Model price for every quote, grouped into (maturity, style) batches"""
    pricer = create_pricer(params, ctx, cos_cfg)
    prices = np.empty(len(chain_slice))
    groups: Dict[Tuple[float, OptionStyle], List[int]] = {}
    for index, quote in enumerate(chain_slice):
        groups.setdefault((quote.maturity, quote.style), []).append(index)
    for (tau, style), indices in groups.items():
        strikes = [chain_slice[i].strike for i in indices]
        prices[indices] = pricer.price_many(strikes, tau, style)
    return prices


def _weighted_error(params: ModelParams, chain_slice: Sequence[OptionQuote], ctx: MarketContext,
                    weights: np.ndarray, cos_cfg: CosConfig) -> Tuple[float, Optional[str]]:
    """Objective value and the name of the error that rejected the point, if any"""
    if not params.is_valid():
        return math.inf, "OutOfBounds"
    try:
        predicted = model_prices(params, chain_slice, ctx, cos_cfg)
    except PricingError as e:
        return math.inf, type(e).__name__
    market = np.array([q.price for q in chain_slice], dtype=float)
    value = float(np.sum(weights * (market - predicted) ** 2))
    if not math.isfinite(value):
        return math.inf, "NonFinite"
    return value, None


def objective(params: ModelParams, chain_slice: Sequence[OptionQuote], ctx: MarketContext,
              cfg: CalibrationConfig = None, cos_cfg: CosConfig = None) -> float:
    """
    sum_j omega_j (market_j - model_j)^2 over the given quotes. Pricer
    failures and parameters outside the box give +inf.
    """
    cfg = cfg or CalibrationConfig()
    value, _ = _weighted_error(params, chain_slice, ctx, quote_weights(chain_slice, cfg), cos_cfg)
    return value


def latin_hypercube_starts(dimension: int, n_starts: int, seed: int) -> np.ndarray:
    """
    Starting points in the unit box. Drawn in fixed batches with spawned
    seeds so a larger n_starts only appends points.
    """
    n_batches = -(-n_starts // START_BATCH)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    batches = [
        qmc.LatinHypercube(d=dimension, rng=np.random.default_rng(child)).random(START_BATCH)
        for child in children
    ]
    return np.vstack(batches)[:n_starts]


@dataclass(frozen=True)
class StartOutcome:
    """Local optimum reached from one start"""
    index: int
    z: np.ndarray
    objective: float
    iterations: int
    converged: bool
    simplex_diameter: float
    rejected: Dict[str, int]


def _simplex_diameter(simplex: np.ndarray) -> float:
    diffs = simplex[:, None, :] - simplex[None, :, :]
    return float(np.max(np.linalg.norm(diffs, axis=-1)))


class _StartRunner:
    """One calibration problem shared by all starts"""

    def __init__(self, kind: ModelKind, quotes: Tuple[OptionQuote, ...], ctx: MarketContext,
                 weights: np.ndarray, cfg: CalibrationConfig, cos_cfg: CosConfig):
        self.cls = params_class(kind)
        self.quotes = quotes
        self.ctx = ctx
        self.weights = weights
        self.cfg = cfg
        self.cos_cfg = cos_cfg
        self.lower = self.cls.lower_bounds()
        self.span = self.cls.upper_bounds() - self.lower
        self.dimension = self.cls.dimension()
        self.anchor = (self.cls.anchor().to_array() - self.lower) / self.span
        # stopping tolerances scale with the weights so omega -> c omega gives the same path
        self.scale = float(np.sum(weights))

    def to_params(self, z: np.ndarray) -> ModelParams:
        return self.cls.from_array(self.lower + np.clip(z, 0.0, 1.0) * self.span)

    def run(self, index: int, z0: np.ndarray) -> StartOutcome:
        rejected: Counter = Counter()

        def fun(z):
            value, reason = _weighted_error(self.to_params(z), self.quotes, self.ctx, self.weights, self.cos_cfg)
            if reason:
                rejected[reason] += 1
            return value

        # a start that cannot be priced is halved toward the anchor until it can
        z0 = np.asarray(z0, dtype=float)
        history = [fun(z0)]
        repairs = 0
        while not math.isfinite(history[0]) and repairs < START_REPAIR_HALVINGS:
            z0 = self.anchor + 0.5 * (z0 - self.anchor)
            history[0] = fun(z0)
            repairs += 1
        if repairs:
            logger.debug("start %d moved %d halvings toward the anchor", index, repairs)

        def record(intermediate_result):
            history.append(float(intermediate_result.fun))

        result = minimize(
            fun,
            z0,
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * self.dimension,
            callback=record,
            options={
                "maxiter": self.cfg.max_iters,
                "xatol": self.cfg.xatol,
                "fatol": self.cfg.tol_objective * self.scale,
                "adaptive": True,
            },
        )

        diameter = _simplex_diameter(result.final_simplex[0])
        window = 2 * self.dimension
        reference = history[-1 - window] if len(history) > window else history[0]
        best = float(result.fun)
        improvement = reference - best if math.isfinite(reference) else math.inf
        converged = (
            math.isfinite(best)
            and diameter < SIMPLEX_DIAMETER_TOL
            and improvement < self.cfg.tol_objective * self.scale
        )
        logger.debug(
            "start %d: objective=%.6g iterations=%d diameter=%.3g rejected=%s",
            index, best, result.nit, diameter, dict(rejected),
        )
        return StartOutcome(
            index=index,
            z=np.clip(result.x, 0.0, 1.0),
            objective=best,
            iterations=int(result.nit),
            converged=converged,
            simplex_diameter=diameter,
            rejected=dict(rejected),
        )


def calibrate(model_kind: ModelKind, chain_slice: Sequence[OptionQuote], ctx: MarketContext,
              cfg: CalibrationConfig = None, cos_cfg: CosConfig = None,
              max_workers: Optional[int] = None) -> CalibrationResult:
    """Best local optimum over all starts for one model on one maturity"""
    cfg = cfg or CalibrationConfig()
    cos_cfg = cos_cfg or CosConfig()
    quotes = tuple(chain_slice)
    keep = np.array([not cfg.otm_only or _is_otm(q, ctx.spot) for q in quotes], dtype=bool)
    if cfg.weights is WeightScheme.CUSTOM:
        # custom weights index the unfiltered slice
        weights = quote_weights(quotes, cfg)[keep]
        quotes = tuple(q for q, k in zip(quotes, keep) if k)
    else:
        quotes = tuple(q for q, k in zip(quotes, keep) if k)
        weights = quote_weights(quotes, cfg)

    cls = params_class(model_kind)
    label = quotes[0].expiry_label if quotes else (chain_slice[0].expiry_label if chain_slice else "")
    needed = max(3, cls.dimension())
    if len(quotes) < needed:
        raise InsufficientQuotesError(
            f"{model_kind.label} on {label!r} needs at least {needed} quotes, {len(quotes)} remain",
            error_code="INSUFFICIENT_QUOTES",
            details={"model": model_kind.value, "expiry_label": label, "quotes": len(quotes)},
        )

    runner = _StartRunner(model_kind, quotes, ctx, weights, cfg, cos_cfg)
    starts = latin_hypercube_starts(cls.dimension(), cfg.n_starts, cfg.seed)
    workers = min(max_workers or Config.MAX_WORKERS, len(starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(runner.run, range(len(starts)), starts))
    else:
        outcomes = [runner.run(i, z0) for i, z0 in enumerate(starts)]

    finite = [o for o in outcomes if math.isfinite(o.objective)]
    if not finite:
        raise AllStartsFailedError(
            f"every start for {model_kind.label} on {label!r} ended on a rejected point",
            error_code="ALL_STARTS_FAILED",
            details={"model": model_kind.value, "expiry_label": label},
        )
    best = min(finite, key=lambda o: (o.objective, o.index))

    truncations = sum(o.rejected.get(TruncationError.__name__, 0) for o in outcomes)
    if truncations:
        logger.warning("%s %s: %d evaluations retreated from series truncation failures",
                       model_kind.label, label, truncations)

    result = CalibrationResult(
        params=runner.to_params(best.z),
        objective=best.objective,
        converged=best.converged,
        iterations=best.iterations,
        expiry_label=label,
        details={
            "start_index": best.index,
            "starts": len(outcomes),
            "failed_starts": len(outcomes) - len(finite),
            "simplex_diameter": best.simplex_diameter,
            "quotes": len(quotes),
        },
    )
    logger.info("Calibrated %s on %s: objective=%.6g converged=%s iterations=%d",
                model_kind.label, label, result.objective, result.converged, result.iterations)
    return result
