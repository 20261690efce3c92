"""
Closed-form pricers
Black-Scholes formula and the Merton jump diffusion Poisson-weighted series
"""

import logging
import math
from typing import Sequence

import numpy as np
from scipy.special import erfc

from ..core.exceptions import DomainError, TruncationError
from ..core.interfaces import IOptionPricer
from ..core.models import MarketContext, OptionStyle
from ..core.parameters import BSParams, MJDParams, ModelKind, ModelParams

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)

MERTON_WEIGHT_FLOOR = 1e-14
MERTON_MAX_TERMS = 170


def norm_cdf(x):
    """Standard normal CDF through the complementary error function"""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / _SQRT2)


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _check_inputs(ctx: MarketContext, sigma: float, strike: float, tau: float):
    values = {"spot": ctx.spot, "sigma": sigma, "strike": strike, "tau": tau}
    for name, value in values.items():
        if not (math.isfinite(value) and value > 0):
            raise DomainError(
                f"{name} must be positive and finite, got {value!r}",
                error_code="PRICER_DOMAIN",
                details=values,
            )
    if not math.isfinite(ctx.rate):
        raise DomainError(f"rate must be finite, got {ctx.rate!r}", error_code="PRICER_DOMAIN")


def _bs_call_values(spot, strike, tau, rate, sigma) -> np.ndarray:
    """Vectorised call formula; inputs broadcast against each other"""
    rate = np.asarray(rate, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    vol_sqrt_t = sigma * math.sqrt(tau)
    d_plus = (np.log(spot / strike) + (rate + 0.5 * sigma ** 2) * tau) / vol_sqrt_t
    d_minus = d_plus - vol_sqrt_t
    discounted_strike = strike * np.exp(-rate * tau)
    value = norm_cdf(d_plus) * spot - norm_cdf(d_minus) * discounted_strike
    return np.clip(value, np.maximum(0.0, spot - discounted_strike), spot)


def bs_call(ctx: MarketContext, sigma: float, strike: float, tau: float) -> float:
    """Black-Scholes call N(d+)S - N(d-)K e^{-r tau}"""
    _check_inputs(ctx, sigma, strike, tau)
    return float(_bs_call_values(ctx.spot, strike, tau, ctx.rate, sigma))


def bs_put(ctx: MarketContext, sigma: float, strike: float, tau: float) -> float:
    """Put through put-call parity P = C - S + K e^{-r tau}"""
    call = bs_call(ctx, sigma, strike, tau)
    return max(call - ctx.spot + strike * math.exp(-ctx.rate * tau), 0.0)


def bs_vega(ctx: MarketContext, sigma: float, strike: float, tau: float) -> float:
    """S phi(d+) sqrt(tau)"""
    _check_inputs(ctx, sigma, strike, tau)
    d_plus = (math.log(ctx.spot / strike) + (ctx.rate + 0.5 * sigma ** 2) * tau) / (sigma * math.sqrt(tau))
    return float(ctx.spot * norm_pdf(d_plus) * math.sqrt(tau))


def merton_weights(intensity: float) -> np.ndarray:
    """
    Poisson weights e^{-L} L^k / k! by recurrence, stopping at the first k with
    weight below the floor and k above the mean L.
    """
    k = 0
    weight = math.exp(-intensity)
    weights = [weight]
    while not (weight < MERTON_WEIGHT_FLOOR and k > intensity):
        if k >= MERTON_MAX_TERMS:
            raise TruncationError(
                f"Merton series tail not below {MERTON_WEIGHT_FLOOR:g} by k={MERTON_MAX_TERMS} "
                f"(Poisson mean {intensity:.4g})",
                error_code="MERTON_TRUNCATION",
                details={"intensity": intensity},
            )
        k += 1
        weight = weight * intensity / k
        weights.append(weight)
    return np.array(weights)


def _check_mjd(params: MJDParams, tau: float):
    issues = params.bound_violations()
    if issues:
        raise DomainError("; ".join(issues), error_code="PARAMS_OUT_OF_BOUNDS")
    if not (math.isfinite(tau) and tau > 0):
        raise DomainError(f"tau must be positive, got {tau!r}", error_code="PRICER_DOMAIN")


def _merton_call_values(ctx: MarketContext, params: MJDParams, strikes: np.ndarray, tau: float) -> np.ndarray:
    weights = merton_weights(params.lam * params.m * tau)
    k = np.arange(weights.size, dtype=float)
    sigma_k = np.sqrt(params.sigma ** 2 + k * params.delta ** 2 / tau)
    rate_k = ctx.rate - params.lam * (params.m - 1.0) + k * math.log(params.m) / tau
    # rows: series terms, columns: strikes
    terms = _bs_call_values(ctx.spot, strikes[None, :], tau, rate_k[:, None], sigma_k[:, None])
    return weights @ terms


def merton_call(ctx: MarketContext, params: MJDParams, strike: float, tau: float) -> float:
    """Merton series sum_k Poisson(k; lambda m tau) C_BS(r_k, sigma_k)"""
    _check_mjd(params, tau)
    _check_inputs(ctx, params.sigma, strike, tau)
    return float(_merton_call_values(ctx, params, np.array([strike], dtype=float), tau)[0])


def merton_put(ctx: MarketContext, params: MJDParams, strike: float, tau: float) -> float:
    call = merton_call(ctx, params, strike, tau)
    return max(call - ctx.spot + strike * math.exp(-ctx.rate * tau), 0.0)


class AnalyticPricer(IOptionPricer):
    """Closed-form pricer for the Black-Scholes and Merton models"""

    def __init__(self, params: ModelParams, ctx: MarketContext):
        if not self.supports_model(params.kind):
            raise DomainError(
                f"No closed form for model {params.kind.value}",
                error_code="NO_CLOSED_FORM",
            )
        self.params = params
        self.ctx = ctx

    def supports_model(self, kind: ModelKind) -> bool:
        return kind in (ModelKind.BS, ModelKind.MJD)

    def price(self, strike: float, tau: float, style: OptionStyle = OptionStyle.CALL) -> float:
        return float(self.price_many([strike], tau, style)[0])

    def price_many(self, strikes: Sequence[float], tau: float, style: OptionStyle = OptionStyle.CALL) -> np.ndarray:
        strikes = np.asarray(strikes, dtype=float)
        sigma = self.params.sigma
        for strike in strikes:
            _check_inputs(self.ctx, sigma, float(strike), tau)

        if isinstance(self.params, BSParams):
            calls = _bs_call_values(self.ctx.spot, strikes, tau, self.ctx.rate, sigma)
        else:
            _check_mjd(self.params, tau)
            calls = _merton_call_values(self.ctx, self.params, strikes, tau)

        if style is OptionStyle.CALL:
            return np.asarray(calls, dtype=float)
        puts = calls - self.ctx.spot + strikes * math.exp(-self.ctx.rate * tau)
        return np.maximum(puts, 0.0)
