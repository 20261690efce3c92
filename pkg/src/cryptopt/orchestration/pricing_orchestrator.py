"""
Pricing Orchestrator
Coordinates calibration, pricing, error evaluation and Monte Carlo checks over a whole option chain
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config.settings import Config
from ..core.exceptions import ParamsFileError
from ..core.interfaces import IValidator
from ..core.models import (
    CalibrationConfig,
    CalibrationResult,
    CosConfig,
    ErrorReport,
    MarketContext,
    McConfig,
    OptionChain,
    OptionQuote,
    OptionStyle,
)
from ..core.parameters import REPORT_ORDER, ModelKind, ModelParams
from ..providers.monte_carlo import mc_prices
from ..providers.pricer_factory import create_pricer
from ..validation.chain_validator import ChainValidator
from ..validation.error_metrics import error_report
from .calibration import calibrate, model_prices

logger = logging.getLogger(__name__)

AGGREGATE_SCOPE = "all"


@dataclass(frozen=True)
class PricedSlice:
    """Model prices for the quotes of one model, in chain order"""
    model: ModelKind
    quotes: Tuple[OptionQuote, ...]
    prices: np.ndarray


@dataclass(frozen=True)
class McComparison:
    """Monte Carlo estimate next to the closed-form or Fourier price"""
    strike: float
    reference: float
    mc_price: float
    std_error: float

    @property
    def z_score(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.mc_price == self.reference else float("inf")
        return (self.mc_price - self.reference) / self.std_error


class PricingOrchestrator:
    """Runs the calibrate, price and evaluate workflow for one chain"""

    def __init__(
        self,
        cos_config: CosConfig = None,
        calibration_config: CalibrationConfig = None,
        max_workers: Optional[int] = None,
        validator: IValidator = None,
    ):
        self.cos_config = cos_config or CosConfig()
        self.calibration_config = calibration_config or CalibrationConfig()
        self.max_workers = max_workers or Config.MAX_WORKERS
        self.validator = validator or ChainValidator()

        # Processing statistics
        self.stats = {
            'total_calibrations': 0,
            'successful_calibrations': 0,
            'failed_calibrations': 0,
            'priced_quotes': 0,
            'total_processing_time': 0.0,
            'average_processing_time': 0.0
        }

    def calibrate_chain(self, chain: OptionChain, models: Sequence[ModelKind]) -> List[CalibrationResult]:
        """
        Calibrate every (model, expiry) pair concurrently. Results come back in
        model order, then chain expiry order; the first failure is re-raised.
        """
        for violation in self.validator.validate(chain):
            logger.warning("Calibrating a chain with violation %s: %s", violation.rule, violation.message)

        groups = chain.expiry_groups()
        tasks = [(kind, label) for kind in models for label in groups]
        if not tasks:
            return []

        def run(task):
            kind, label = task
            start_time = time.time()
            try:
                result = calibrate(
                    kind, groups[label], chain.context, self.calibration_config, self.cos_config,
                    max_workers=1 if len(tasks) > 1 else self.max_workers,
                )
                return result, None, time.time() - start_time
            except Exception as e:
                return None, e, time.time() - start_time

        with ThreadPoolExecutor(max_workers=min(self.max_workers, len(tasks))) as executor:
            outcomes = list(executor.map(run, tasks))

        results = []
        first_error = None
        for (kind, label), (result, error, elapsed) in zip(tasks, outcomes):
            self._update_stats(elapsed, error is None)
            if error is not None:
                logger.error("Calibration of %s on %s failed: %s", kind.label, label, error)
                first_error = first_error or error
            else:
                results.append(result)
        if first_error is not None:
            raise first_error
        return results

    def price_chain(self, chain: OptionChain, results: Sequence[CalibrationResult]) -> Dict[ModelKind, PricedSlice]:
        """Price every quote of each calibrated expiry, not only the OTM ones"""
        groups = chain.expiry_groups()
        unknown = sorted({r.expiry_label for r in results} - set(groups))
        if unknown:
            raise ParamsFileError(
                f"Parameters reference expiries {unknown} absent from the chain {list(groups)}",
                error_code="PARAMS_EXPIRY_MISMATCH",
            )

        by_model: Dict[ModelKind, Dict[str, ModelParams]] = {}
        for result in results:
            by_model.setdefault(result.model, {})[result.expiry_label] = result.params

        priced: Dict[ModelKind, PricedSlice] = {}
        for kind in REPORT_ORDER:
            if kind not in by_model:
                continue
            quotes, prices = [], []
            for label, slice_quotes in groups.items():
                params = by_model[kind].get(label)
                if params is None:
                    logger.warning("No %s parameters for expiry %s; its quotes are not priced", kind.label, label)
                    continue
                quotes.extend(slice_quotes)
                prices.extend(model_prices(params, slice_quotes, chain.context, self.cos_config))
            priced[kind] = PricedSlice(kind, tuple(quotes), np.asarray(prices, dtype=float))
            self.stats['priced_quotes'] += len(quotes)
        return priced

    def evaluate(self, chain: OptionChain,
                 results: Sequence[CalibrationResult]) -> List[Tuple[str, Dict[ModelKind, ErrorReport]]]:
        """Error reports per expiry in chain order, then the aggregate over all priced quotes"""
        priced = self.price_chain(chain, results)
        tables = []
        for label in chain.expiry_labels() + [AGGREGATE_SCOPE]:
            reports = {}
            for kind, slice_ in priced.items():
                mask = [label == AGGREGATE_SCOPE or q.expiry_label == label for q in slice_.quotes]
                if not any(mask):
                    continue
                observed = [q.price for q, keep in zip(slice_.quotes, mask) if keep]
                reports[kind] = error_report(observed, slice_.prices[np.array(mask)], scope=label)
            if reports:
                tables.append((label, reports))
        return tables

    def mc_check(self, params: ModelParams, ctx: MarketContext, strikes: Sequence[float], tau: float,
                 mc_config: McConfig, style: OptionStyle = OptionStyle.CALL) -> List[McComparison]:
        """Monte Carlo prices on common paths against the deterministic pricer"""
        reference = create_pricer(params, ctx, self.cos_config).price_many(strikes, tau, style)
        prices, errors = mc_prices(params, ctx, strikes, tau, style, mc_config, self.max_workers)
        return [
            McComparison(float(k), float(ref), float(p), float(se))
            for k, ref, p, se in zip(strikes, reference, prices, errors)
        ]

    def get_processing_statistics(self) -> Dict[str, Any]:
        """Get processing statistics"""
        total = self.stats['successful_calibrations'] + self.stats['failed_calibrations']
        return {
            'calibration_stats': {
                'total_calibrations': total,
                'successful_calibrations': self.stats['successful_calibrations'],
                'failed_calibrations': self.stats['failed_calibrations'],
                'average_processing_time': self.stats['average_processing_time']
            },
            'performance_metrics': {
                'total_processing_time': self.stats['total_processing_time'],
                'priced_quotes': self.stats['priced_quotes'],
                'success_rate': self.stats['successful_calibrations'] / max(1, total)
            }
        }

    def reset_statistics(self):
        """Reset processing statistics"""
        self.stats = {
            'total_calibrations': 0,
            'successful_calibrations': 0,
            'failed_calibrations': 0,
            'priced_quotes': 0,
            'total_processing_time': 0.0,
            'average_processing_time': 0.0
        }

    def _update_stats(self, processing_time: float, success: bool):
        self.stats['total_calibrations'] += 1
        self.stats['total_processing_time'] += processing_time
        if success:
            self.stats['successful_calibrations'] += 1
        else:
            self.stats['failed_calibrations'] += 1
        self.stats['average_processing_time'] = (
            self.stats['total_processing_time'] / self.stats['total_calibrations']
        )
