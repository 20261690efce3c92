from datetime import date

import numpy as np
import pytest

from cryptopt.core.exceptions import InsufficientQuotesError, ParamsFileError
from cryptopt.core.models import CalibrationConfig, CalibrationResult, MarketContext, McConfig
from cryptopt.core.parameters import REPORT_ORDER, BSParams, ModelKind
from cryptopt.orchestration.pricing_orchestrator import McComparison, PricingOrchestrator
from cryptopt.processors.fixture_generator import fixture_spec, generate_chain, preset

TRADE_DATE = date(2024, 3, 11)


@pytest.fixture
def bs_chain():
    spec = fixture_spec(BSParams(sigma=0.8), spot=60000.0, rate=0.05, expiries=("Jun24", "Dec24"),
                        trade_date=TRADE_DATE)
    return generate_chain(spec, seed=1)


@pytest.fixture
def orchestrator():
    return PricingOrchestrator(calibration_config=CalibrationConfig(n_starts=2, seed=9), max_workers=2)


def test_calibrate_chain_in_expiry_order(bs_chain, orchestrator):
    results = orchestrator.calibrate_chain(bs_chain, [ModelKind.BS])
    assert [r.expiry_label for r in results] == ["Jun24", "Dec24"]
    for result in results:
        assert result.params.sigma == pytest.approx(0.8, abs=1e-4)
    stats = orchestrator.get_processing_statistics()
    assert stats["calibration_stats"]["successful_calibrations"] == 2
    assert stats["performance_metrics"]["success_rate"] == 1.0


def test_calibrate_chain_reraises_failures(bs_chain, orchestrator):
    chain = type(bs_chain)(context=bs_chain.context, quotes=bs_chain.quotes[:8])
    with pytest.raises(InsufficientQuotesError):
        orchestrator.calibrate_chain(chain, [ModelKind.BATES])
    assert orchestrator.get_processing_statistics()["calibration_stats"]["failed_calibrations"] == 1
    orchestrator.reset_statistics()
    assert orchestrator.get_processing_statistics()["calibration_stats"]["total_calibrations"] == 0


def _bs_results(sigma=0.8):
    return [
        CalibrationResult(params=BSParams(sigma=sigma), objective=0.0, converged=True, iterations=1,
                          expiry_label=label)
        for label in ("Jun24", "Dec24")
    ]


def test_price_chain_prices_every_quote(bs_chain, orchestrator):
    priced = orchestrator.price_chain(bs_chain, _bs_results())
    assert list(priced) == [ModelKind.BS]
    assert len(priced[ModelKind.BS].quotes) == len(bs_chain)
    observed = np.array([q.price for q in priced[ModelKind.BS].quotes])
    np.testing.assert_allclose(priced[ModelKind.BS].prices, observed, rtol=1e-12)


def test_price_chain_rejects_unknown_expiry(bs_chain, orchestrator):
    results = _bs_results() + [
        CalibrationResult(params=BSParams(sigma=0.5), objective=0.0, converged=True, iterations=1,
                          expiry_label="Mar26")
    ]
    with pytest.raises(ParamsFileError) as err:
        orchestrator.price_chain(bs_chain, results)
    assert err.value.error_code == "PARAMS_EXPIRY_MISMATCH"


def test_evaluate_scopes(bs_chain, orchestrator):
    tables = orchestrator.evaluate(bs_chain, _bs_results(sigma=0.9))
    assert [scope for scope, _ in tables] == ["Jun24", "Dec24", "all"]
    aggregate = tables[-1][1][ModelKind.BS]
    assert aggregate.n == len(bs_chain)
    assert aggregate.scope == "all"
    assert aggregate.mape > 0


def test_mc_check_rows(orchestrator):
    ctx = MarketContext(spot=100.0, rate=0.02)
    rows = orchestrator.mc_check(BSParams(sigma=0.5), ctx, [90.0, 110.0], 0.5, McConfig(n_paths=40_000, seed=2))
    assert [row.strike for row in rows] == [90.0, 110.0]
    for row in rows:
        assert isinstance(row, McComparison)
        assert abs(row.z_score) < 5


def test_z_score_with_zero_error():
    assert McComparison(100.0, 5.0, 5.0, 0.0).z_score == 0.0
    assert McComparison(100.0, 5.0, 5.5, 0.0).z_score == float("inf")


@pytest.mark.slow
def test_bs_fits_a_jump_chain_worst():
    """On noisy jump-model prices the single-volatility model has the largest MAPE"""
    base = preset("btc-kou")
    spec = fixture_spec(base.params, base.spot, rate=base.rate, expiries=("Jun24", "Dec24"),
                        noise=0.01, strike_step=base.strike_step, trade_date=base.trade_date)
    chain = generate_chain(spec, seed=20240311)
    orchestrator = PricingOrchestrator(calibration_config=CalibrationConfig(n_starts=4), max_workers=4)
    results = orchestrator.calibrate_chain(chain, list(REPORT_ORDER))
    aggregate = orchestrator.evaluate(chain, results)[-1][1]
    mape = {kind: report.mape for kind, report in aggregate.items()}
    assert max(mape, key=mape.get) is ModelKind.BS
