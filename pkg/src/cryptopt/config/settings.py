import logging
import os
from datetime import date
from typing import Any, Dict

from ..core.exceptions import ConfigurationError

# Python 3.10 compat: logging.getLevelNamesMapping() (3.11+) returns a copy of _nameToLevel
_level_names_mapping = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))


class Config:
    """Application configuration"""

    # Numerical defaults
    COS_N_TERMS = int(os.getenv("CRYPTOPT_COS_N", "256"))
    COS_TRUNC_MULT = float(os.getenv("CRYPTOPT_COS_L", "10"))
    COS_TRUNC_MULT_FAT_TAIL = 14.0
    FAT_TAIL_VG_NU = 1.0
    FAT_TAIL_JUMP_INTENSITY = 10.0

    # Calibration defaults
    CALIBRATION_STARTS = 8
    CALIBRATION_TOLERANCE = 1e-12
    CALIBRATION_MAX_ITERS = 4000

    # Monte Carlo defaults
    MC_PATHS = 1_000_000
    MC_STEPS_PER_YEAR = 512
    MC_BLOCK_SIZE = 2 ** 14

    # Processing settings
    MAX_WORKERS = int(os.getenv("CRYPTOPT_MAX_WORKERS", "4"))
    LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # Fixture settings
    FIXTURE_RATE = float(os.getenv("CRYPTOPT_FIXTURE_RATE", "0.05"))

    DEFAULT_SEED = 20240311

    @classmethod
    def seed(cls) -> int:
        """Default seed, overridable through CRYPTOPT_SEED at call time"""
        raw = os.getenv("CRYPTOPT_SEED")
        if raw is None or not raw.strip():
            return cls.DEFAULT_SEED
        try:
            value = int(raw)
        except ValueError:
            raise ConfigurationError(
                f"CRYPTOPT_SEED must be an integer, got {raw!r}",
                error_code="SEED_INVALID",
            )
        if not 0 <= value < 2 ** 64:
            raise ConfigurationError("CRYPTOPT_SEED must fit in 64 unsigned bits", error_code="SEED_INVALID")
        return value

    @classmethod
    def trade_date(cls) -> date:
        raw = os.getenv("CRYPTOPT_TRADE_DATE", "2024-03-11")
        try:
            return date.fromisoformat(raw)
        except ValueError:
            raise ConfigurationError(f"CRYPTOPT_TRADE_DATE must be YYYY-MM-DD, got {raw!r}", error_code="TRADE_DATE_INVALID")

    @classmethod
    def log_level(cls) -> str:
        return os.getenv("CRYPTOPT_LOG_LEVEL", "INFO").upper()

    @classmethod
    def validate_configuration(cls) -> Dict[str, Any]:
        """Validate application configuration"""

        issues = []

        try:
            cls.seed()
        except ConfigurationError as e:
            issues.append(str(e))

        try:
            cls.trade_date()
        except ConfigurationError as e:
            issues.append(str(e))

        if cls.COS_N_TERMS < 16 or cls.COS_N_TERMS & (cls.COS_N_TERMS - 1):
            issues.append("CRYPTOPT_COS_N must be a power of two >= 16")

        if cls.COS_TRUNC_MULT < 4:
            issues.append("CRYPTOPT_COS_L must be >= 4")

        if cls.MAX_WORKERS < 1:
            issues.append("CRYPTOPT_MAX_WORKERS must be positive")

        if cls.log_level() not in _level_names_mapping():
            issues.append(f"CRYPTOPT_LOG_LEVEL {cls.log_level()!r} is not a logging level")

        return {
            'valid': len(issues) == 0,
            'issues': issues
        }

    @classmethod
    def get_display_config(cls) -> Dict[str, Any]:
        """Get configuration for display"""

        return {
            'cos_n_terms': cls.COS_N_TERMS,
            'cos_trunc_mult': cls.COS_TRUNC_MULT,
            'calibration_starts': cls.CALIBRATION_STARTS,
            'mc_paths': cls.MC_PATHS,
            'max_workers': cls.MAX_WORKERS,
            'seed': cls.seed(),
            'trade_date': cls.trade_date().isoformat(),
            'fixture_rate': cls.FIXTURE_RATE,
        }


def configure_logging(level: str = None, stream=None) -> logging.Logger:
    """Install one stream handler on the package logger, or point it at a new stream"""
    name = (level or Config.log_level()).upper()
    if name not in _level_names_mapping():
        raise ConfigurationError(f"Unknown log level {level!r}", error_code="LOG_LEVEL_INVALID")
    logger = logging.getLogger("cryptopt")
    logger.setLevel(name)
    handler = next((h for h in logger.handlers if getattr(h, "_cryptopt_handler", False)), None)
    if handler is None:
        handler = logging.StreamHandler(stream)
        handler.setFormatter(logging.Formatter(Config.LOG_FORMAT))
        handler._cryptopt_handler = True
        logger.addHandler(handler)
    elif stream is not None:
        handler.setStream(stream)
    return logger
