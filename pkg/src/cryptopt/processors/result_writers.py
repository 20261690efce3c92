"""
Result persistence
Calibration JSON, priced-chain CSV, error-metric CSV and per-model parameter
evolution CSV, with readers for the first two
"""

import json
import logging
import math
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from ..core.exceptions import ParamsFileError, ValidationError
from ..core.models import CalibrationResult, ErrorReport, OptionQuote, PricedQuote
from ..core.parameters import REPORT_ORDER, ModelKind, params_from_dict

logger = logging.getLogger(__name__)

PRICED_COLUMNS = ["expiry_label", "strike", "market_price", "model_price", "abs_error", "rel_error"]
ERROR_COLUMNS = ["scope", "model", "n", "rmse", "mae", "mape", "msle"]
RESULT_KEYS = ("model", "expiry_label", "params", "objective", "converged", "iterations")


def _prepare(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def calibration_record(result: CalibrationResult) -> Dict:
    return {
        "model": result.model.value,
        "expiry_label": result.expiry_label,
        "params": result.params.as_dict(),
        "objective": float(result.objective),
        "converged": bool(result.converged),
        "iterations": int(result.iterations),
    }


def write_calibration_json(results: Sequence[CalibrationResult], path) -> None:
    path = _prepare(path)
    records = [calibration_record(r) for r in results]
    path.write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %d calibration results to %s", len(records), path)


def read_calibration_json(path) -> List[CalibrationResult]:
    path = Path(path)
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParamsFileError(f"{path} does not exist", error_code="PARAMS_FILE_MISSING")
    except json.JSONDecodeError as e:
        raise ParamsFileError(f"{path} is not valid JSON: {e}", error_code="PARAMS_NOT_JSON")
    if not isinstance(records, list):
        raise ParamsFileError(f"{path} must hold a JSON array", error_code="PARAMS_NOT_ARRAY")

    results = []
    for position, record in enumerate(records):
        if not isinstance(record, dict) or any(key not in record for key in RESULT_KEYS):
            raise ParamsFileError(
                f"{path}: entry {position} must have keys {list(RESULT_KEYS)}",
                error_code="PARAMS_MISMATCH",
            )
        if not isinstance(record["params"], dict):
            raise ParamsFileError(f"{path}: entry {position} params must be an object", error_code="PARAMS_MISMATCH")
        results.append(CalibrationResult(
            params=params_from_dict(record["model"], record["params"]),
            objective=float(record["objective"]),
            converged=bool(record["converged"]),
            iterations=int(record["iterations"]),
            expiry_label=str(record["expiry_label"]),
        ))
    return results


def priced_quotes(quotes: Sequence[OptionQuote], model_prices: Sequence[float]) -> List[PricedQuote]:
    if len(quotes) != len(model_prices):
        raise ValidationError(
            f"{len(model_prices)} model prices for {len(quotes)} quotes",
            error_code="PRICED_LENGTH",
        )
    rows = []
    for quote, model_price in zip(quotes, model_prices):
        abs_error = abs(float(model_price) - quote.price)
        rel_error = abs_error / quote.price if quote.price > 0 else math.nan
        rows.append(PricedQuote(quote.expiry_label, quote.strike, quote.price, float(model_price), abs_error, rel_error))
    return rows


def write_priced_chain_csv(quotes: Sequence[OptionQuote], model_prices: Sequence[float], path) -> None:
    """One row per quote; rel_error is blank for zero market prices"""
    path = _prepare(path)
    rows = priced_quotes(quotes, model_prices)
    frame = pd.DataFrame([vars(r) for r in rows], columns=PRICED_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d priced quotes to %s", len(rows), path)


def read_priced_chain_csv(path) -> List[PricedQuote]:
    frame = pd.read_csv(path, dtype={"expiry_label": str}, keep_default_na=False,
                        na_values={"rel_error": [""]})
    return [
        PricedQuote(
            expiry_label=str(row.expiry_label),
            strike=float(row.strike),
            market_price=float(row.market_price),
            model_price=float(row.model_price),
            abs_error=float(row.abs_error),
            rel_error=float(row.rel_error),
        )
        for row in frame.itertuples(index=False)
    ]


def write_error_csv(reports: Sequence[Tuple[ModelKind, ErrorReport]], path) -> None:
    """Machine-readable error metrics; undefined MAPE is left blank"""
    path = _prepare(path)
    rows = [
        {
            "scope": report.scope,
            "model": kind.label,
            "n": report.n,
            "rmse": report.rmse,
            "mae": report.mae,
            "mape": np.nan if report.mape is None else report.mape,
            "msle": report.msle,
        }
        for kind, report in reports
    ]
    pd.DataFrame(rows, columns=ERROR_COLUMNS).to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d error rows to %s", len(rows), path)


def write_parameter_evolution_csv(results: Sequence[CalibrationResult], maturities: Mapping[str, float], path) -> None:
    """Calibrated parameters of one model across expiries, in maturity order"""
    path = _prepare(path)
    ordered = sorted(results, key=lambda r: (maturities.get(r.expiry_label, math.inf), r.expiry_label))
    rows = []
    for result in ordered:
        row = {"expiry_label": result.expiry_label, "maturity": maturities.get(result.expiry_label, math.nan)}
        row.update(result.params.as_dict())
        row.update({"objective": result.objective, "converged": result.converged})
        rows.append(row)
    pd.DataFrame(rows).to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote parameter evolution for %d expiries to %s", len(rows), path)


def group_by_model(results: Sequence[CalibrationResult]) -> Dict[ModelKind, List[CalibrationResult]]:
    grouped: Dict[ModelKind, List[CalibrationResult]] = {}
    for kind in REPORT_ORDER:
        matching = [r for r in results if r.model is kind]
        if matching:
            grouped[kind] = matching
    return grouped
