"""
Synthetic chain generator
Builds option chains priced by any model, with expiries given as month labels
such as "Jun24" resolved to the last Friday of the month and maturities as
ACT/365 year fractions from the trade date
"""

import calendar
import logging
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import Config
from ..core.exceptions import ConfigurationError
from ..core.models import CosConfig, MarketContext, OptionChain, OptionQuote, OptionStyle
from ..core.parameters import KouParams, ModelParams
from ..providers.pricer_factory import create_pricer

logger = logging.getLogger(__name__)

DAYS_PER_YEAR = 365.0
DEFAULT_MONEYNESS = (0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.8, 2.0)


def expiry_date(label: str) -> date:
    """Last Friday of the month named by a label like 'Dec24'"""
    try:
        month_start = datetime.strptime(label.strip(), "%b%y").date()
    except ValueError:
        raise ConfigurationError(f"Expiry label {label!r} is not of the form Mon + 2-digit year",
                                 error_code="EXPIRY_LABEL_INVALID")
    last_day = month_start.replace(day=calendar.monthrange(month_start.year, month_start.month)[1])
    return last_day - timedelta(days=(last_day.weekday() - calendar.FRIDAY) % 7)


def year_fraction(trade_date: date, expiry: date) -> float:
    """ACT/365"""
    return (expiry - trade_date).days / DAYS_PER_YEAR


@dataclass(frozen=True)
class FixtureSpec:
    """Everything needed to generate one synthetic chain"""
    params: ModelParams
    spot: float
    rate: float = Config.FIXTURE_RATE
    expiries: Tuple[str, ...] = ("Jun24", "Dec24", "Dec25")
    moneyness: Tuple[float, ...] = DEFAULT_MONEYNESS
    styles: Tuple[OptionStyle, ...] = (OptionStyle.CALL,)
    strike_step: Optional[float] = None
    noise: float = 0.0
    trade_date: date = field(default_factory=Config.trade_date)


PRESETS: Dict[str, FixtureSpec] = {
    # Kou parameters inside the ranges reported for BTC futures options on 2024-03-11
    "btc-kou": FixtureSpec(
        params=KouParams(sigma=0.6, lam=3.0, p=0.7, eta1=7.5, eta2=2.0),
        spot=71000.0,
        rate=0.05,
        expiries=("Jun24", "Jul24", "Aug24", "Sep24", "Dec24", "Mar25", "Jun25", "Dec25"),
        strike_step=1000.0,
        noise=0.02,
        trade_date=date(2024, 3, 11),
    ),
}


def _strikes(spec: FixtureSpec) -> np.ndarray:
    strikes = spec.spot * np.asarray(spec.moneyness, dtype=float)
    if spec.strike_step:
        strikes = np.round(strikes / spec.strike_step) * spec.strike_step
    strikes = np.unique(strikes[strikes > 0])
    if strikes.size == 0:
        raise ConfigurationError("Fixture strike grid is empty", error_code="FIXTURE_STRIKES_EMPTY")
    return strikes


def generate_chain(spec: FixtureSpec, seed: Optional[int] = None, cos_cfg: CosConfig = None) -> OptionChain:
    """
    Model prices on the strike grid for every expiry. With spec.noise > 0,
    prices are multiplied by exp(noise * Z), Z standard normal from the seed.
    """
    ctx = MarketContext(spot=spec.spot, rate=spec.rate, trade_date=spec.trade_date)
    pricer = create_pricer(spec.params, ctx, cos_cfg)
    rng = np.random.default_rng(Config.seed() if seed is None else seed)
    strikes = _strikes(spec)

    quotes = []
    for label in spec.expiries:
        tau = year_fraction(spec.trade_date, expiry_date(label))
        if tau <= 0:
            raise ConfigurationError(f"Expiry {label} is not after trade date {spec.trade_date}",
                                     error_code="FIXTURE_EXPIRY_PAST")
        for style in spec.styles:
            prices = pricer.price_many(strikes, tau, style)
            if spec.noise > 0:
                prices = prices * np.exp(spec.noise * rng.standard_normal(prices.size))
            quotes.extend(
                OptionQuote(strike=float(k), maturity=tau, price=float(p), style=style, expiry_label=label)
                for k, p in zip(strikes, prices)
            )

    logger.info("Generated %d %s quotes over %d expiries", len(quotes), spec.params.kind.label, len(spec.expiries))
    return OptionChain(context=ctx, quotes=tuple(quotes))


def preset(name: str) -> FixtureSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigurationError(f"Unknown fixture preset {name!r}; known: {sorted(PRESETS)}",
                                 error_code="FIXTURE_PRESET_UNKNOWN")


def fixture_spec(params: ModelParams, spot: float, rate: Optional[float] = None,
                 expiries: Sequence[str] = None, moneyness: Sequence[float] = None,
                 noise: float = 0.0, strike_step: Optional[float] = None,
                 trade_date: Optional[date] = None) -> FixtureSpec:
    defaults = FixtureSpec(params=params, spot=spot)
    return FixtureSpec(
        params=params,
        spot=spot,
        rate=defaults.rate if rate is None else rate,
        expiries=tuple(expiries) if expiries else defaults.expiries,
        moneyness=tuple(moneyness) if moneyness else defaults.moneyness,
        strike_step=strike_step,
        noise=noise,
        trade_date=trade_date or defaults.trade_date,
    )
