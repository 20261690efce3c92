"""
cryptopt command-line application
Calibrates option pricing models to crypto futures option chains, prices the
chains, reports pricing errors and cross-checks prices by Monte Carlo
"""
from dotenv import load_dotenv
load_dotenv()


import argparse
import logging
import sys
from datetime import date
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

# Core imports
from .config.settings import Config, configure_logging
from .core.exceptions import (
    CalibrationError,
    ChainParseError,
    ConfigurationError,
    CryptoOptError,
    McConfigError,
    ParamsFileError,
    PricingError,
    SeedExhaustionError,
    SimulationError,
    ValidationError,
)
from .core.models import (
    CalibrationConfig,
    CalibrationResult,
    CosConfig,
    MarketContext,
    McConfig,
    OptionStyle,
    RunConfig,
    WeightScheme,
)
from .core.parameters import ModelKind

# Orchestration imports
from .orchestration.pricing_orchestrator import PricingOrchestrator

# Provider imports
from .providers.monte_carlo import default_n_steps

# Processor imports
from .processors.csv_chain_processor import parse_chain_csv, write_chain_csv
from .processors.fixture_generator import fixture_spec, generate_chain, preset
from .processors.result_writers import (
    group_by_model,
    read_calibration_json,
    write_calibration_json,
    write_error_csv,
    write_parameter_evolution_csv,
    write_priced_chain_csv,
)

# Validation imports
from .validation.chain_validator import validate_chain
from .validation.error_metrics import render_error_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_INPUT = 2
EXIT_CALIBRATION = 3
EXIT_PRICING = 4

MODEL_CHOICES = ["all"] + [kind.value for kind in ModelKind] + ["svj"]

CALIBRATION_FILE = "calibration.json"
ERROR_TABLE_FILE = "errors_table.txt"
ERROR_CSV_FILE = "errors.csv"


def exit_code_for(error: BaseException) -> int:
    """Map an error to the process exit status"""
    if isinstance(error, (ChainParseError, ParamsFileError, ConfigurationError, ValidationError,
                          McConfigError, SeedExhaustionError, FileNotFoundError)):
        return EXIT_INPUT
    if isinstance(error, CalibrationError):
        return EXIT_CALIBRATION
    if isinstance(error, (PricingError, SimulationError)):
        return EXIT_PRICING
    return EXIT_OTHER


def _csv_floats(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _csv_labels(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


class CryptoOptionApp:
    """Main application class for the command-line interface"""

    def __init__(self, stdout: TextIO = None, stderr: TextIO = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.orchestrator: Optional[PricingOrchestrator] = None

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Parse arguments, dispatch the subcommand and return the exit code"""
        parser = self.build_parser()
        args = parser.parse_args(argv)

        try:
            configure_logging(args.log_level, stream=self.stderr)
            self._log_configuration()
            return args.handler(args)
        except (CryptoOptError, OSError) as e:
            code = getattr(e, "error_code", None) or type(e).__name__.upper()
            print(f"error[{code}]: {e}", file=self.stderr)
            logger.debug("Command %s failed", args.command, exc_info=True)
            return exit_code_for(e)

    def _log_configuration(self):
        """Report environment configuration problems, and the effective settings at debug level"""
        report = Config.validate_configuration()
        for issue in report['issues']:
            logger.warning("Configuration issue: %s", issue)
        if report['valid']:
            logger.debug("Configuration: %s", Config.get_display_config())

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="cryptopt",
            description="Price, calibrate and evaluate option models on crypto futures option chains",
        )
        parser.add_argument("--log-level", default=Config.log_level(), help="logging level (default from CRYPTOPT_LOG_LEVEL)")
        commands = parser.add_subparsers(dest="command", required=True)

        calibrate = commands.add_parser("calibrate", help="calibrate models per expiry")
        self._add_input(calibrate)
        calibrate.add_argument("--model", default="all", choices=MODEL_CHOICES)
        calibrate.add_argument("--out", required=True, type=Path)
        calibrate.add_argument("--starts", type=int, default=Config.CALIBRATION_STARTS)
        calibrate.add_argument("--weights", default=WeightScheme.UNIFORM.value,
                               choices=[WeightScheme.UNIFORM.value, WeightScheme.INVERSE_SQUARED_PRICE.value])
        calibrate.add_argument("--no-otm-filter", action="store_true", help="calibrate on every quote")
        calibrate.add_argument("--max-iters", type=int, default=Config.CALIBRATION_MAX_ITERS)
        calibrate.add_argument("--tol", type=float, default=Config.CALIBRATION_TOLERANCE)
        calibrate.add_argument("--seed", type=int, default=None)
        self._add_cos(calibrate)
        self._add_workers(calibrate)
        calibrate.set_defaults(handler=self._cmd_calibrate)

        price = commands.add_parser("price", help="price every quote with calibrated parameters")
        self._add_input(price)
        price.add_argument("--params", required=True, type=Path)
        price.add_argument("--out", required=True, type=Path)
        self._add_cos(price)
        price.set_defaults(handler=self._cmd_price)

        evaluate = commands.add_parser("evaluate", help="error tables per expiry and overall")
        self._add_input(evaluate)
        evaluate.add_argument("--params", required=True, type=Path)
        evaluate.add_argument("--out", required=True, type=Path)
        self._add_cos(evaluate)
        evaluate.set_defaults(handler=self._cmd_evaluate)

        mc_check = commands.add_parser("mc-check", help="Monte Carlo price against the deterministic pricer")
        mc_check.add_argument("--params", required=True, type=Path)
        mc_check.add_argument("--model", choices=MODEL_CHOICES[1:], default=None)
        mc_check.add_argument("--expiry", default=None)
        mc_check.add_argument("--strike", required=True, type=float, action="append")
        mc_check.add_argument("--tau", required=True, type=float)
        mc_check.add_argument("--style", default="call", choices=["call", "put"])
        mc_check.add_argument("--paths", type=int, default=Config.MC_PATHS)
        mc_check.add_argument("--steps", type=int, default=None, help="time steps (default 512 per year, at least 64 for heston and bates)")
        mc_check.add_argument("--seed", type=int, default=None)
        mc_check.add_argument("--input", type=Path, default=None, help="chain supplying futures level and rate")
        mc_check.add_argument("--spot", type=float, default=None)
        mc_check.add_argument("--rate", type=float, default=None)
        mc_check.add_argument("--trade-date", type=date.fromisoformat, default=None)
        self._add_cos(mc_check)
        self._add_workers(mc_check)
        mc_check.set_defaults(handler=self._cmd_mc_check)

        fixture = commands.add_parser("generate-fixture", help="write a synthetic chain")
        fixture.add_argument("--out", required=True, type=Path, help="CSV file to write")
        fixture.add_argument("--preset", default=None, help="named fixture, e.g. btc-kou")
        fixture.add_argument("--params", type=Path, default=None, help="calibration JSON with the generating model")
        fixture.add_argument("--model", choices=MODEL_CHOICES[1:], default=None)
        fixture.add_argument("--expiry", default=None)
        fixture.add_argument("--spot", type=float, default=None)
        fixture.add_argument("--rate", type=float, default=None)
        fixture.add_argument("--expiries", type=_csv_labels, default=None, help="labels such as Jun24,Dec24")
        fixture.add_argument("--moneyness", type=_csv_floats, default=None)
        fixture.add_argument("--strike-step", type=float, default=None)
        fixture.add_argument("--noise", type=float, default=None)
        fixture.add_argument("--seed", type=int, default=None)
        fixture.add_argument("--trade-date", type=date.fromisoformat, default=None)
        self._add_cos(fixture)
        fixture.set_defaults(handler=self._cmd_generate_fixture)

        validate = commands.add_parser("validate", help="list chain invariant violations")
        self._add_input(validate)
        validate.set_defaults(handler=self._cmd_validate)
        return parser

    @staticmethod
    def _add_input(parser: argparse.ArgumentParser):
        parser.add_argument("--input", required=True, type=Path)
        parser.add_argument("--trade-date", type=date.fromisoformat, default=None)

    @staticmethod
    def _add_cos(parser: argparse.ArgumentParser):
        parser.add_argument("--cos-n", type=int, default=Config.COS_N_TERMS)
        parser.add_argument("--cos-l", type=float, default=Config.COS_TRUNC_MULT)

    @staticmethod
    def _add_workers(parser: argparse.ArgumentParser):
        parser.add_argument("--workers", type=int, default=Config.MAX_WORKERS)

    def _initialize_orchestrator(self, args, calibration: CalibrationConfig = None) -> PricingOrchestrator:
        self.orchestrator = PricingOrchestrator(
            cos_config=CosConfig(n_terms=args.cos_n, trunc_mult=args.cos_l),
            calibration_config=calibration,
            max_workers=getattr(args, "workers", None),
        )
        return self.orchestrator

    def _load_chain(self, args, strict: bool = True):
        if not args.input.exists():
            raise ConfigurationError(f"input file {args.input} does not exist", error_code="INPUT_MISSING")
        return parse_chain_csv(args.input, trade_date=args.trade_date, strict=strict)

    def _cmd_calibrate(self, args) -> int:
        seed = Config.seed() if args.seed is None else args.seed
        run_config = RunConfig(
            input_path=args.input,
            output_dir=args.out,
            model=args.model,
            cos=CosConfig(n_terms=args.cos_n, trunc_mult=args.cos_l),
            calibration=CalibrationConfig(
                weights=WeightScheme(args.weights),
                n_starts=args.starts,
                tol_objective=args.tol,
                max_iters=args.max_iters,
                otm_only=not args.no_otm_filter,
                seed=seed,
            ),
            max_workers=args.workers,
        )
        missing = run_config.check_paths()
        if missing:
            raise ConfigurationError(f"input files do not exist: {missing}", error_code="INPUT_MISSING")
        chain = self._load_chain(args)
        orchestrator = self._initialize_orchestrator(args, run_config.calibration)
        results = orchestrator.calibrate_chain(chain, run_config.models())

        write_calibration_json(results, args.out / CALIBRATION_FILE)
        maturities = {label: quotes[0].maturity for label, quotes in chain.expiry_groups().items()}
        for kind, model_results in group_by_model(results).items():
            write_parameter_evolution_csv(model_results, maturities, args.out / f"parameters_{kind.value}.csv")

        for result in results:
            print(
                f"{result.model.label} {result.expiry_label} objective={result.objective:.6g} "
                f"converged={str(result.converged).lower()} iterations={result.iterations}",
                file=self.stdout,
            )
        return EXIT_OK

    def _cmd_price(self, args) -> int:
        chain = self._load_chain(args)
        results = read_calibration_json(args.params)
        priced = self._initialize_orchestrator(args).price_chain(chain, results)
        for kind, slice_ in priced.items():
            path = args.out / f"priced_{kind.value}.csv"
            write_priced_chain_csv(slice_.quotes, slice_.prices, path)
            print(f"{kind.label} {len(slice_.quotes)} quotes -> {path}", file=self.stdout)
        return EXIT_OK

    def _cmd_evaluate(self, args) -> int:
        chain = self._load_chain(args)
        results = read_calibration_json(args.params)
        tables = self._initialize_orchestrator(args).evaluate(chain, results)

        text = "\n".join(render_error_table(reports, title=f"[{scope}]") for scope, reports in tables)
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / ERROR_TABLE_FILE).write_text(text, encoding="utf-8")
        write_error_csv(
            [(kind, report) for _, reports in tables for kind, report in reports.items()],
            args.out / ERROR_CSV_FILE,
        )
        self.stdout.write(text)
        return EXIT_OK

    def _select_result(self, results: List[CalibrationResult], model: Optional[str],
                       expiry: Optional[str]) -> CalibrationResult:
        matching = [
            r for r in results
            if (model is None or r.model is ModelKind.parse(model))
            and (expiry is None or r.expiry_label == expiry)
        ]
        if len(matching) != 1:
            raise ConfigurationError(
                f"{len(matching)} parameter sets match model={model} expiry={expiry}; "
                f"select exactly one with --model and --expiry",
                error_code="PARAMS_SELECTION",
            )
        return matching[0]

    def _context(self, args) -> MarketContext:
        if args.input is not None:
            return self._load_chain(args, strict=False).context
        if args.spot is None or args.rate is None:
            raise ConfigurationError("give --input or both --spot and --rate", error_code="CONTEXT_MISSING")
        return MarketContext(spot=args.spot, rate=args.rate, trade_date=args.trade_date or Config.trade_date())

    def _cmd_mc_check(self, args) -> int:
        result = self._select_result(read_calibration_json(args.params), args.model, args.expiry)
        ctx = self._context(args)
        steps = args.steps or default_n_steps(result.params.kind, args.tau)
        seed = Config.seed() if args.seed is None else args.seed
        mc_config = McConfig(n_paths=args.paths, n_steps=steps, seed=seed)
        style = OptionStyle.parse(args.style)

        rows = self._initialize_orchestrator(args).mc_check(result.params, ctx, args.strike, args.tau, mc_config, style)
        for row in rows:
            print(
                f"{result.model.label} {result.expiry_label} {style.value} K={row.strike:.10g} tau={args.tau:.10g} "
                f"reference={row.reference:.10g} mc={row.mc_price:.10g} se={row.std_error:.6g} z={row.z_score:+.3f}",
                file=self.stdout,
            )
        return EXIT_OK

    def _cmd_generate_fixture(self, args) -> int:
        if args.params is not None:
            if args.spot is None:
                raise ConfigurationError("--params needs --spot", error_code="FIXTURE_SPOT_MISSING")
            params = self._select_result(read_calibration_json(args.params), args.model, args.expiry).params
            spec = fixture_spec(
                params, args.spot, rate=args.rate, expiries=args.expiries, moneyness=args.moneyness,
                noise=args.noise or 0.0, strike_step=args.strike_step, trade_date=args.trade_date,
            )
        else:
            base = preset(args.preset or "btc-kou")
            spec = fixture_spec(
                base.params,
                args.spot or base.spot,
                rate=base.rate if args.rate is None else args.rate,
                expiries=args.expiries or base.expiries,
                moneyness=args.moneyness or base.moneyness,
                noise=base.noise if args.noise is None else args.noise,
                strike_step=args.strike_step or base.strike_step,
                trade_date=args.trade_date or base.trade_date,
            )
        seed = Config.seed() if args.seed is None else args.seed
        chain = generate_chain(spec, seed=seed, cos_cfg=CosConfig(n_terms=args.cos_n, trunc_mult=args.cos_l))
        write_chain_csv(chain, args.out)
        print(f"{len(chain)} quotes in {len(chain.expiry_labels())} expiries -> {args.out}", file=self.stdout)
        return EXIT_OK

    def _cmd_validate(self, args) -> int:
        chain = self._load_chain(args, strict=False)
        violations = validate_chain(chain)
        for violation in violations:
            print(f"{violation.rule}: {violation.message}", file=self.stdout)
        if violations:
            return EXIT_INPUT
        print(f"ok: {len(chain)} quotes in {len(chain.expiry_labels())} expiries", file=self.stdout)
        return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main application entry point"""
    app = CryptoOptionApp()
    return app.run(argv)


if __name__ == "__main__":
    sys.exit(main())
