"""
CSV Chain Processor
Implements IChainProcessor for the one-underlying, one-trade-date option chain CSV format
"""

import logging
import math
from datetime import date
from pathlib import Path
from typing import List, Optional

import pandas as pd

from ..config.settings import Config
from ..core.exceptions import (
    EmptyFileError,
    InconsistentContextError,
    MissingColumnError,
    RowParseError,
    ValidationError,
)
from ..core.interfaces import IChainProcessor
from ..core.models import MarketContext, OptionChain, OptionQuote, OptionStyle
from ..validation.chain_validator import validate_chain

logger = logging.getLogger(__name__)

CHAIN_COLUMNS = [
    "expiry_label",
    "maturity_years",
    "strike",
    "style",
    "mid_price",
    "futures_price",
    "rate",
]


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        number = float(value)
    except ValueError:
        raise RowParseError(line, f"row {line}: {column}={value!r} is not a number", error_code="ROW_PARSE")
    if math.isnan(number):
        raise RowParseError(line, f"row {line}: {column} is NaN", error_code="ROW_PARSE")
    return number


def parse_chain_csv(path, trade_date: Optional[date] = None, strict: bool = False) -> OptionChain:
    """
    Read a chain file; rows are numbered from 1 after the header. With strict
    set, any chain invariant violation raises ValidationError, otherwise the
    violations are logged.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise EmptyFileError(f"{path} is empty", error_code="EMPTY_FILE")

    frame.columns = [str(c).strip() for c in frame.columns]
    missing = [c for c in CHAIN_COLUMNS if c not in frame.columns]
    if missing:
        raise MissingColumnError(f"{path} lacks columns {missing}", error_code="MISSING_COLUMN",
                                 details={"missing": missing})
    extra = [c for c in frame.columns if c not in CHAIN_COLUMNS]
    if extra:
        logger.warning("Ignoring extra columns in %s: %s", path, extra)
    if frame.empty:
        raise EmptyFileError(f"{path} has a header but no data rows", error_code="EMPTY_FILE")

    quotes: List[OptionQuote] = []
    context_values = None
    for line, row in enumerate(frame[CHAIN_COLUMNS].itertuples(index=False), start=1):
        record = row._asdict()
        spot = _parse_float(record["futures_price"], "futures_price", line)
        rate = _parse_float(record["rate"], "rate", line)
        if context_values is None:
            context_values = (spot, rate)
        elif (spot, rate) != context_values:
            raise InconsistentContextError(
                line,
                f"row {line}: futures_price/rate ({spot}, {rate}) differ from row 1 {context_values}",
                error_code="INCONSISTENT_CONTEXT",
            )
        try:
            style = OptionStyle.parse(record["style"])
        except ValueError as e:
            raise RowParseError(line, f"row {line}: {e}", error_code="ROW_PARSE")
        quotes.append(OptionQuote(
            strike=_parse_float(record["strike"], "strike", line),
            maturity=_parse_float(record["maturity_years"], "maturity_years", line),
            price=_parse_float(record["mid_price"], "mid_price", line),
            style=style,
            expiry_label=record["expiry_label"].strip(),
        ))

    spot, rate = context_values
    chain = OptionChain(
        context=MarketContext(spot=spot, rate=rate, trade_date=trade_date or Config.trade_date()),
        quotes=tuple(quotes),
    )

    violations = validate_chain(chain)
    if violations and strict:
        raise ValidationError(
            f"{path}: {len(violations)} chain violations, first: {violations[0].message}",
            error_code="CHAIN_INVALID",
            details={"rules": sorted({v.rule for v in violations})},
        )
    for violation in violations:
        logger.warning("%s: %s", path, violation.message)

    logger.info("Loaded %d quotes in %d expiries from %s", len(chain), len(chain.expiry_labels()), path)
    return chain


def chain_frame(chain: OptionChain) -> pd.DataFrame:
    rows = [
        {
            "expiry_label": q.expiry_label,
            "maturity_years": q.maturity,
            "strike": q.strike,
            "style": q.style.value,
            "mid_price": q.price,
            "futures_price": chain.context.spot,
            "rate": chain.context.rate,
        }
        for q in chain.quotes
    ]
    return pd.DataFrame(rows, columns=CHAIN_COLUMNS)


def write_chain_csv(chain: OptionChain, path) -> None:
    """Inverse of parse_chain_csv; floats are written at full precision"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    chain_frame(chain).to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d quotes to %s", len(chain), path)


class CsvChainProcessor(IChainProcessor):
    """Option chain CSV reader and writer"""

    def __init__(self, trade_date: Optional[date] = None, strict: bool = False):
        self.supported_extensions = ['.csv']
        self.trade_date = trade_date
        self.strict = strict

    def can_process(self, file_extension: str) -> bool:
        return file_extension.lower() in self.supported_extensions

    def load_chain(self, path: Path) -> OptionChain:
        return parse_chain_csv(path, trade_date=self.trade_date, strict=self.strict)

    def write_chain(self, chain: OptionChain, path: Path) -> None:
        write_chain_csv(chain, path)
