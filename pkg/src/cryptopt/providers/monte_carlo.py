"""
Monte Carlo oracle
Independent simulation pricers for the six models. Paths are generated in
fixed-size blocks, each with its own substream spawned from one seed, so
threaded and serial runs give bit-identical results.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from ..config.settings import Config
from ..core.exceptions import DomainError, McConfigError, SeedExhaustionError
from ..core.interfaces import IOptionPricer
from ..core.models import MarketContext, McConfig, OptionStyle
from ..core.parameters import (
    BatesParams,
    BSParams,
    HestonParams,
    KouParams,
    MJDParams,
    ModelKind,
    ModelParams,
    VGParams,
)
from .characteristic_functions import kou_drift, vg_omega

logger = logging.getLogger(__name__)

SV_MIN_STEPS = 64
_ANTITHETIC = (ModelKind.BS, ModelKind.MJD, ModelKind.KOU, ModelKind.VG)


@dataclass(frozen=True)
class _BlockStats:
    """Count, mean and centred sum of squares per payoff column"""
    n: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, samples: np.ndarray) -> "_BlockStats":
        # shifting by the first sample keeps constant payoffs at exactly zero spread
        shift = samples[0]
        centred = samples - shift
        offset = centred.mean(axis=0)
        m2 = ((centred - offset) ** 2).sum(axis=0)
        return cls(n=samples.shape[0], mean=shift + offset, m2=m2)

    def merge(self, other: "_BlockStats") -> "_BlockStats":
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.n / n)
        m2 = self.m2 + other.m2 + delta ** 2 * (self.n * other.n / n)
        return _BlockStats(n=n, mean=mean, m2=m2)


def _check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < 2 ** 64:
        raise SeedExhaustionError(
            f"seed must be an integer in [0, 2^64), got {seed!r}",
            error_code="MC_SEED_INVALID",
        )
    return int(seed)


def default_n_steps(kind: ModelKind, tau: float) -> int:
    """Time steps at the configured density, never below the floor for stochastic volatility"""
    steps = max(1, round(Config.MC_STEPS_PER_YEAR * tau))
    if kind in (ModelKind.HESTON, ModelKind.BATES):
        return max(SV_MIN_STEPS, steps)
    return steps


def _check_model(model: ModelParams, ctx: MarketContext, tau: float, cfg: McConfig):
    issues = model.bound_violations()
    if issues:
        raise DomainError("; ".join(issues), error_code="PARAMS_OUT_OF_BOUNDS")
    if not (math.isfinite(ctx.spot) and ctx.spot > 0 and math.isfinite(ctx.rate)):
        raise DomainError("spot must be positive and rate finite", error_code="PRICER_DOMAIN")
    if not (math.isfinite(tau) and tau > 0):
        raise DomainError(f"tau must be positive, got {tau!r}", error_code="PRICER_DOMAIN")
    if model.kind in (ModelKind.HESTON, ModelKind.BATES) and cfg.n_steps < SV_MIN_STEPS:
        raise McConfigError(
            f"stochastic volatility models need n_steps >= {SV_MIN_STEPS}, got {cfg.n_steps}",
            error_code="MC_STEPS_TOO_FEW",
        )


# Terminal log-price samplers. Antithetic samplers return the (+Z, -Z) pair.

def _bs_terminal(params: BSParams, ctx: MarketContext, tau: float, rng: np.random.Generator, n: int):
    drift = math.log(ctx.spot) + (ctx.rate - 0.5 * params.sigma ** 2) * tau
    shock = params.sigma * math.sqrt(tau) * rng.standard_normal(n)
    return drift + shock, drift - shock


def _mjd_terminal(params: MJDParams, ctx: MarketContext, tau: float, rng: np.random.Generator, n: int):
    drift = math.log(ctx.spot) + (ctx.rate - 0.5 * params.sigma ** 2 - params.lam * (params.m - 1.0)) * tau
    shock = params.sigma * math.sqrt(tau) * rng.standard_normal(n)
    counts = rng.poisson(params.lam * tau, n)
    jumps = counts * params.jump_log_mean + params.delta * np.sqrt(counts) * rng.standard_normal(n)
    return drift + jumps + shock, drift + jumps - shock


def _kou_terminal(params: KouParams, ctx: MarketContext, tau: float, rng: np.random.Generator, n: int):
    drift = math.log(ctx.spot) + kou_drift(params, ctx) * tau
    shock = params.sigma * math.sqrt(tau) * rng.standard_normal(n)
    counts = rng.poisson(params.lam * tau, n)
    n_up = rng.binomial(counts, params.p)
    # sums of exponential jumps are gamma distributed; shape 0 gives 0
    up = rng.gamma(n_up, 1.0 / params.eta1)
    down = rng.gamma(counts - n_up, 1.0 / params.eta2)
    jumps = up - down
    return drift + jumps + shock, drift + jumps - shock


def _vg_terminal(params: VGParams, ctx: MarketContext, tau: float, rng: np.random.Generator, n: int):
    drift = math.log(ctx.spot) + (ctx.rate + vg_omega(params)) * tau
    clock = rng.gamma(tau / params.nu, params.nu, n)
    shock = params.sigma * np.sqrt(clock) * rng.standard_normal(n)
    base = drift + params.theta * clock
    return base + shock, base - shock


def _stochastic_vol_terminal(kappa: float, theta_bar: float, sigma_v: float, rho: float, v0: float,
                             lam: float, alpha: float, delta_j: float, compensator: float,
                             ctx: MarketContext, tau: float, n_steps: int,
                             rng: np.random.Generator, n: int) -> np.ndarray:
    """Full-truncation Euler in log price; jumps are skipped when lam is 0"""
    dt = tau / n_steps
    sqrt_dt = math.sqrt(dt)
    rho_perp = math.sqrt(max(1.0 - rho * rho, 0.0))
    drift = (ctx.rate - lam * compensator) * dt
    log_s = np.full(n, math.log(ctx.spot))
    v = np.full(n, v0)
    for _ in range(n_steps):
        v_pos = np.maximum(v, 0.0)
        vol = np.sqrt(v_pos) * sqrt_dt
        z = rng.standard_normal((2, n))
        log_s += drift - 0.5 * v_pos * dt + vol * z[0]
        if lam > 0:
            counts = rng.poisson(lam * dt, n)
            log_s += counts * alpha + delta_j * np.sqrt(counts) * rng.standard_normal(n)
        v += kappa * (theta_bar - v_pos) * dt + sigma_v * vol * (rho * z[0] + rho_perp * z[1])
    return log_s


def _heston_terminal(params: HestonParams, ctx, tau, n_steps, rng, n):
    return _stochastic_vol_terminal(
        params.kappa, params.theta_bar, params.sigma_v, params.rho, params.v0,
        0.0, 0.0, 0.0, 0.0, ctx, tau, n_steps, rng, n,
    )


def _bates_terminal(params: BatesParams, ctx, tau, n_steps, rng, n):
    return _stochastic_vol_terminal(
        params.kappa, params.theta_bar, params.eta, params.rho, params.v0,
        params.lam, params.alpha, params.delta_j, params.jump_compensator, ctx, tau, n_steps, rng, n,
    )


_TERMINAL_SAMPLERS = {
    ModelKind.BS: _bs_terminal,
    ModelKind.MJD: _mjd_terminal,
    ModelKind.KOU: _kou_terminal,
    ModelKind.VG: _vg_terminal,
}

_PATH_SAMPLERS = {
    ModelKind.HESTON: _heston_terminal,
    ModelKind.BATES: _bates_terminal,
}


def _simulate(model: ModelParams, ctx: MarketContext, tau: float, cfg: McConfig,
              payoff: Callable[[np.ndarray], np.ndarray], max_workers: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean and standard error of payoff(S_tau) per payoff column. Antithetic
    models average each (+Z, -Z) pair into one sample.
    """
    seed = _check_seed(cfg.seed)
    _check_model(model, ctx, tau, cfg)

    antithetic = model.kind in _ANTITHETIC
    block = Config.MC_BLOCK_SIZE // 2 if antithetic else Config.MC_BLOCK_SIZE
    n_samples = (cfg.n_paths + 1) // 2 if antithetic else cfg.n_paths
    sizes = [block] * (n_samples // block)
    if n_samples % block:
        sizes.append(n_samples % block)
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def run_block(index: int) -> _BlockStats:
        rng = np.random.Generator(np.random.PCG64(streams[index]))
        size = sizes[index]
        if antithetic:
            plus, minus = _TERMINAL_SAMPLERS[model.kind](model, ctx, tau, rng, size)
            samples = 0.5 * (payoff(np.exp(plus)) + payoff(np.exp(minus)))
        else:
            log_s = _PATH_SAMPLERS[model.kind](model, ctx, tau, cfg.n_steps, rng, size)
            samples = payoff(np.exp(log_s))
        return _BlockStats.of(samples)

    if max_workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            blocks: List[_BlockStats] = list(executor.map(run_block, range(len(sizes))))
    else:
        blocks = [run_block(i) for i in range(len(sizes))]

    total = blocks[0]
    for stats in blocks[1:]:
        total = total.merge(stats)

    if total.n > 1:
        std_error = np.sqrt(total.m2 / (total.n - 1) / total.n)
    else:
        std_error = np.full_like(total.mean, np.inf)
    logger.debug("Simulated %s: %d samples in %d blocks", model.kind.value, total.n, len(sizes))
    return total.mean, std_error


def mc_prices(model: ModelParams, ctx: MarketContext, strikes: Sequence[float], tau: float,
              style: OptionStyle = OptionStyle.CALL, cfg: McConfig = None,
              max_workers: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Discounted prices and standard errors for several strikes on common paths"""
    cfg = cfg or McConfig()
    strikes = np.atleast_1d(np.asarray(strikes, dtype=float))
    if np.any(~np.isfinite(strikes)) or np.any(strikes <= 0):
        raise DomainError("strikes must be positive", error_code="PRICER_DOMAIN")

    if style is OptionStyle.CALL:
        def payoff(terminal):
            return np.maximum(terminal[:, None] - strikes[None, :], 0.0)
    else:
        def payoff(terminal):
            return np.maximum(strikes[None, :] - terminal[:, None], 0.0)

    mean, std_error = _simulate(model, ctx, tau, cfg, payoff, max_workers)
    discount = math.exp(-ctx.rate * tau)
    return discount * mean, discount * std_error


def mc_price(model: ModelParams, ctx: MarketContext, strike: float, tau: float,
             style: OptionStyle = OptionStyle.CALL, cfg: McConfig = None,
             max_workers: int = 1) -> Tuple[float, float]:
    """Discounted mean payoff and its standard error"""
    prices, errors = mc_prices(model, ctx, [strike], tau, style, cfg, max_workers)
    return float(prices[0]), float(errors[0])


def mc_martingale_check(model: ModelParams, ctx: MarketContext, tau: float,
                        cfg: McConfig = None, max_workers: int = 1) -> Tuple[float, float]:
    """Simulated E[S_tau] e^{-r tau} / S0 with standard error; 1 for a correct drift"""
    cfg = cfg or McConfig()
    scale = math.exp(-ctx.rate * tau) / ctx.spot

    def payoff(terminal):
        return (terminal * scale)[:, None]

    mean, std_error = _simulate(model, ctx, tau, cfg, payoff, max_workers)
    return float(mean[0]), float(std_error[0])


class MonteCarloPricer(IOptionPricer):
    """Simulation pricer; keeps the standard errors of the last call"""

    def __init__(self, params: ModelParams, ctx: MarketContext, cfg: McConfig = None, max_workers: int = 1):
        self.params = params
        self.ctx = ctx
        self.cfg = cfg or McConfig()
        self.max_workers = max_workers
        self.last_std_errors = np.array([])

    def supports_model(self, kind: ModelKind) -> bool:
        return kind in _TERMINAL_SAMPLERS or kind in _PATH_SAMPLERS

    def price(self, strike: float, tau: float, style: OptionStyle = OptionStyle.CALL) -> float:
        return float(self.price_many([strike], tau, style)[0])

    def price_many(self, strikes: Sequence[float], tau: float, style: OptionStyle = OptionStyle.CALL) -> np.ndarray:
        prices, self.last_std_errors = mc_prices(
            self.params, self.ctx, strikes, tau, style, self.cfg, self.max_workers
        )
        return prices
