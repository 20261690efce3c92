"""
Pricing error metrics
RMSE, MAE, MAPE and MSLE of model prices against market prices, and the
plain-text error table with values rounded to three significant figures
"""

import logging
from typing import List, Mapping, Optional, Sequence

import numpy as np

from ..core.exceptions import LengthMismatchError, MetricsDomainError
from ..core.models import ErrorReport
from ..core.parameters import REPORT_ORDER, ModelKind

logger = logging.getLogger(__name__)

TABLE_HEADER = ("Model", "RMSE", "MAE", "MAPE", "MSLE")
UNDEFINED = "n/a"


def error_report(observed: Sequence[float], predicted: Sequence[float], scope: str = "all") -> ErrorReport:
    y = np.asarray(observed, dtype=float).ravel()
    y_hat = np.asarray(predicted, dtype=float).ravel()
    if y.size != y_hat.size or y.size == 0:
        raise LengthMismatchError(
            f"observed and predicted must have equal nonzero length, got {y.size} and {y_hat.size}",
            error_code="METRICS_LENGTH",
        )
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(y_hat))):
        raise MetricsDomainError("prices must be finite", error_code="METRICS_NOT_FINITE")
    if np.any(y <= -1.0) or np.any(y_hat <= -1.0):
        raise MetricsDomainError("MSLE needs every price above -1", error_code="MSLE_DOMAIN")

    errors = y_hat - y
    mae = float(np.mean(np.abs(errors)))
    # sqrt can land an ulp below the mean absolute error when all errors are equal
    rmse = max(float(np.sqrt(np.mean(errors ** 2))), mae)
    msle = float(np.mean((np.log1p(y_hat) - np.log1p(y)) ** 2))

    if np.any(y <= 0):
        logger.warning("MAPE undefined for scope %s: %d observed prices are not positive", scope, int(np.sum(y <= 0)))
        mape: Optional[float] = None
    else:
        mape = float(np.mean(np.abs(errors / y)))

    return ErrorReport(rmse=rmse, mae=mae, mape=mape, msle=msle, n=int(y.size), scope=scope)


def format_sig(value: Optional[float], digits: int = 3) -> str:
    """Round to significant figures and print without exponent or trailing zeros"""
    if value is None:
        return UNDEFINED
    rounded = float(f"{value:.{digits}g}")
    return np.format_float_positional(rounded, trim="-")


def render_error_row(label: str, report: ErrorReport) -> str:
    values = (report.rmse, report.mae, report.mape, report.msle)
    return " ".join([label] + [format_sig(v) for v in values])


def render_error_table(reports: Mapping[ModelKind, ErrorReport], title: Optional[str] = None) -> str:
    """Rows in BS, Heston, Kou, MJD, SVJ, VG order; models without a report are left out"""
    lines: List[str] = []
    if title:
        lines.append(title)
    lines.append(" ".join(TABLE_HEADER))
    for kind in REPORT_ORDER:
        if kind in reports:
            lines.append(render_error_row(kind.label, reports[kind]))
    return "\n".join(lines) + "\n"
