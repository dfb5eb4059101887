# tests/test_config.py

from app.core.logging import configure_logging
from app.core.config import Settings
from pydantic import ValidationError
import logging
import pytest


def test_defaults():
    s = Settings(_env_file=None)
    assert s.SCHEMA_VERSION == "crn-certify/1"
    assert s.LOG_LEVEL == "WARNING"
    assert s.max_workers >= 1


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("CRN_CERTIFY_RTOL", "1e-6")
    monkeypatch.setenv("CRN_CERTIFY_THREADS", "2")
    s = Settings(_env_file=None)
    assert s.RTOL == 1e-6
    assert s.max_workers == 2


def test_debug_forces_debug_logging():
    assert Settings(_env_file=None, DEBUG=True).LOG_LEVEL == "DEBUG"


@pytest.mark.parametrize(
    "overrides",
    [
        {"POWER_LAW_EXPONENT_MIN": 0.5},
        {"POWER_LAW_EXPONENT_MIN": 2.0, "POWER_LAW_EXPONENT_MAX": 1.5},
        {"RATE_CONSTANT_MIN": 3.0},
        {"RTOL": 0.0},
    ],
)
def test_invalid_settings(overrides):
    with pytest.raises(ValidationError):
        Settings(_env_file=None, **overrides)


def test_configure_logging_sets_level():
    root = logging.getLogger()
    previous = root.level
    try:
        configure_logging("debug")
        assert root.level == logging.DEBUG
    finally:
        root.setLevel(previous)
