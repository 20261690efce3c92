import io
import logging

import pytest

from cryptopt.config.settings import Config, configure_logging
from cryptopt.core.exceptions import ConfigurationError


def test_default_seed(monkeypatch):
    monkeypatch.delenv("CRYPTOPT_SEED", raising=False)
    assert Config.seed() == Config.DEFAULT_SEED


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("CRYPTOPT_SEED", "12345")
    assert Config.seed() == 12345


@pytest.mark.parametrize("raw", ["abc", "-3", str(2 ** 64)])
def test_invalid_seed(monkeypatch, raw):
    monkeypatch.setenv("CRYPTOPT_SEED", raw)
    with pytest.raises(ConfigurationError):
        Config.seed()
    report = Config.validate_configuration()
    assert not report["valid"]
    assert any("CRYPTOPT_SEED" in issue for issue in report["issues"])


def test_trade_date(monkeypatch):
    monkeypatch.setenv("CRYPTOPT_TRADE_DATE", "2024-03-11")
    assert Config.trade_date().isoformat() == "2024-03-11"
    monkeypatch.setenv("CRYPTOPT_TRADE_DATE", "11/03/2024")
    with pytest.raises(ConfigurationError):
        Config.trade_date()


def test_clean_environment_is_valid(monkeypatch):
    for name in ("CRYPTOPT_SEED", "CRYPTOPT_TRADE_DATE", "CRYPTOPT_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    assert Config.validate_configuration() == {"valid": True, "issues": []}


def test_configure_logging_reuses_handler():
    stream = io.StringIO()
    logger = configure_logging("DEBUG", stream)
    configure_logging("INFO", stream)
    tagged = [h for h in logger.handlers if getattr(h, "_cryptopt_handler", False)]
    assert len(tagged) == 1
    assert logger.level == logging.INFO
    logging.getLogger("cryptopt.test").info("hello")
    assert "hello" in stream.getvalue()


def test_configure_logging_rejects_unknown_level():
    with pytest.raises(ConfigurationError):
        configure_logging("LOUD")
