"""
Risk-neutral characteristic functions
phi(u, tau) = E[exp(iu ln S_tau)] for the six models, vectorised over u
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from ..core.exceptions import DomainError
from ..core.models import MarketContext
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


def _as_complex(u) -> np.ndarray:
    return np.asarray(u, dtype=complex)


def _finish(u, value: np.ndarray):
    """Return a Python complex for scalar input, an array otherwise"""
    if np.ndim(u) == 0:
        return complex(value)
    return value


def cf_bs(u, tau: float, ctx: MarketContext, sigma: float):
    iu = 1j * _as_complex(u)
    drift = math.log(ctx.spot) + (ctx.rate - 0.5 * sigma ** 2) * tau
    return _finish(u, np.exp(iu * drift + 0.5 * sigma ** 2 * tau * iu ** 2))


def vg_omega(params: VGParams) -> float:
    """Martingale correction (1/nu) ln(1 - theta nu - sigma^2 nu / 2)"""
    base = params.martingale_base()
    if not base > 0:
        raise DomainError(
            f"VG requires 1 - theta*nu - sigma^2*nu/2 > 0, got {base!r}",
            error_code="VG_MARTINGALE_DOMAIN",
            details=params.as_dict(),
        )
    return math.log1p(-params.theta * params.nu - 0.5 * params.sigma ** 2 * params.nu) / params.nu


def cf_vg(u, tau: float, ctx: MarketContext, params: VGParams):
    omega = vg_omega(params)
    iu = 1j * _as_complex(u)
    drift = math.log(ctx.spot) + (ctx.rate + omega) * tau
    inner = -params.theta * params.nu * iu - 0.5 * params.sigma ** 2 * params.nu * iu ** 2
    return _finish(u, np.exp(iu * drift - (tau / params.nu) * np.log1p(inner)))


def cf_mjd(u, tau: float, ctx: MarketContext, params: MJDParams):
    iu = 1j * _as_complex(u)
    drift = math.log(ctx.spot) + (ctx.rate - 0.5 * params.sigma ** 2 - params.lam * (params.m - 1.0)) * tau
    jumps = np.expm1(iu * params.jump_log_mean + 0.5 * params.delta ** 2 * iu ** 2)
    exponent = iu * drift + 0.5 * params.sigma ** 2 * tau * iu ** 2 + params.lam * tau * jumps
    return _finish(u, np.exp(exponent))


def kou_drift(params: KouParams, ctx: MarketContext) -> float:
    """mu = r - sigma^2/2 - lambda (p eta1/(eta1-1) + (1-p) eta2/(eta2+1) - 1)"""
    if not params.eta1 > 1:
        raise DomainError(f"Kou requires eta1 > 1, got {params.eta1!r}", error_code="KOU_ETA1_DOMAIN")
    p, eta1, eta2 = params.p, params.eta1, params.eta2
    mean_jump = p * eta1 / (eta1 - 1.0) + (1.0 - p) * eta2 / (eta2 + 1.0) - 1.0
    return ctx.rate - 0.5 * params.sigma ** 2 - params.lam * mean_jump


def cf_kou(u, tau: float, ctx: MarketContext, params: KouParams):
    mu = kou_drift(params, ctx)
    iu = 1j * _as_complex(u)
    p, eta1, eta2 = params.p, params.eta1, params.eta2
    # p eta1/(eta1 - iu) + (1-p) eta2/(eta2 + iu) - 1, rearranged to vanish exactly at u = 0
    jumps = p * iu / (eta1 - iu) - (1.0 - p) * iu / (eta2 + iu)
    exponent = (
        iu * (math.log(ctx.spot) + mu * tau)
        + 0.5 * params.sigma ** 2 * tau * iu ** 2
        + params.lam * tau * jumps
    )
    return _finish(u, np.exp(exponent))


def heston_log_body(u, tau: float, rate: float, kappa: float, theta_bar: float,
                    sigma_v: float, rho: float, v0: float) -> np.ndarray:
    """
    C(tau, u) + D(tau, u) v0 in the rearrangement with g = (xi - d)/(xi + d)
    and exp(-d tau). With Re(d) >= 0 the decay factor stays bounded and the
    logarithm of (1 - g e^{-d tau})/(1 - g) stays on its principal branch.
    """
    u = _as_complex(u)
    iu = 1j * u
    xi = kappa - rho * sigma_v * iu
    quad = iu + u * u
    d = np.sqrt(xi * xi + sigma_v ** 2 * quad)
    # phi is even in d; keep the root in the right half plane
    d = np.where(d.real < 0, -d, d)
    denom = xi + d
    safe_denom = np.where(denom == 0, 1.0, denom)
    xi_minus_d = np.where(denom == 0, 0.0, -sigma_v ** 2 * quad / safe_denom)
    exact = xi_minus_d == 0

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        g = xi_minus_d / safe_denom
        decay = np.exp(-d * tau)
        growth = -np.expm1(-d * tau)
        d_term = np.where(exact, 0.0, (xi_minus_d / sigma_v ** 2) * growth / (1.0 - g * decay))
        # ln((1 - g e^{-d tau}) / (1 - g)) = ln(1 + g (1 - e^{-d tau}) / (1 - g))
        log_term = np.where(exact, 0.0, np.log1p(g * growth / (1.0 - g)))

    c_term = iu * rate * tau + (kappa * theta_bar / sigma_v ** 2) * (xi_minus_d * tau - 2.0 * log_term)
    return c_term + d_term * v0


def cf_heston(u, tau: float, ctx: MarketContext, params: HestonParams):
    iu = 1j * _as_complex(u)
    body = heston_log_body(
        u, tau, ctx.rate, params.kappa, params.theta_bar, params.sigma_v, params.rho, params.v0
    )
    return _finish(u, np.exp(body + iu * math.log(ctx.spot)))


def cf_bates(u, tau: float, ctx: MarketContext, params: BatesParams):
    iu = 1j * _as_complex(u)
    body = heston_log_body(
        u, tau, ctx.rate, params.kappa, params.theta_bar, params.eta, params.rho, params.v0
    )
    jump = np.expm1(iu * params.alpha + 0.5 * params.delta_j ** 2 * iu ** 2)
    compensator = -iu * params.lam * params.jump_compensator * tau
    exponent = body + iu * math.log(ctx.spot) + compensator + params.lam * tau * jump
    return _finish(u, np.exp(exponent))


_CHARFN_REGISTRY: Dict[ModelKind, Callable] = {
    ModelKind.BS: lambda u, tau, ctx, params: cf_bs(u, tau, ctx, params.sigma),
    ModelKind.VG: cf_vg,
    ModelKind.MJD: cf_mjd,
    ModelKind.KOU: cf_kou,
    ModelKind.HESTON: cf_heston,
    ModelKind.BATES: cf_bates,
}


@dataclass(frozen=True)
class CharFnHandle:
    """A model's characteristic function bound to a market context"""
    model: ModelParams
    ctx: MarketContext

    def __post_init__(self):
        issues = self.model.bound_violations()
        if issues:
            raise DomainError("; ".join(issues), error_code="PARAMS_OUT_OF_BOUNDS")
        if not (math.isfinite(self.ctx.spot) and self.ctx.spot > 0):
            raise DomainError(f"spot must be positive, got {self.ctx.spot!r}", error_code="PRICER_DOMAIN")

    @property
    def kind(self) -> ModelKind:
        return self.model.kind

    def __call__(self, u, tau: float):
        if not (math.isfinite(tau) and tau > 0):
            raise DomainError(f"tau must be positive, got {tau!r}", error_code="PRICER_DOMAIN")
        return _CHARFN_REGISTRY[self.model.kind](u, tau, self.ctx, self.model)
