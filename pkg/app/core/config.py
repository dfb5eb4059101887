# app/core/config.py
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, model_validator
from typing import Optional
import os


class Settings(BaseSettings):
    # General Settings
    APP_NAME: str = Field(default="crn-certify")
    DEBUG: bool = Field(default=False)
    LOG_LEVEL: str = Field(default="WARNING")

    # Parallelism (None = machine parallelism)
    THREADS: Optional[int] = Field(default=None, ge=1)

    # Certificate JSON
    SCHEMA_VERSION: str = Field(default="crn-certify/1")

    # Integrator Settings
    RTOL: float = Field(default=1e-9, gt=0)
    ATOL: float = Field(default=1e-12, gt=0)
    CLAMP_THRESHOLD: float = Field(default=1e-14, ge=0)

    # Numerical Slack
    ORDER_SLACK: float = Field(default=1e-8, ge=0)

    # Exhaustive Searches
    INFIMUM_SAMPLES: int = Field(default=32, ge=0)
    MAX_SIPHON_SPECIES: int = Field(default=20, ge=1)

    # Random Kinetics
    POWER_LAW_EXPONENT_MIN: float = Field(default=1.0)
    POWER_LAW_EXPONENT_MAX: float = Field(default=3.0)
    RATE_CONSTANT_MIN: float = Field(default=0.5, gt=0)
    RATE_CONSTANT_MAX: float = Field(default=2.0, gt=0)
    DEFAULT_SEED: int = Field(default=7)

    @model_validator(mode="after")
    def adjust_for_environment(self):
        """Apply DEBUG and check that the sampling ranges are usable"""
        if self.DEBUG:
            self.LOG_LEVEL = "DEBUG"
        self.LOG_LEVEL = self.LOG_LEVEL.upper()

        if self.POWER_LAW_EXPONENT_MIN < 1:
            # exponents below 1 make v lose differentiability on the boundary
            raise ValueError("POWER_LAW_EXPONENT_MIN must be >= 1")
        if self.POWER_LAW_EXPONENT_MAX < self.POWER_LAW_EXPONENT_MIN:
            raise ValueError("POWER_LAW_EXPONENT_MAX must be >= POWER_LAW_EXPONENT_MIN")
        if self.RATE_CONSTANT_MAX < self.RATE_CONSTANT_MIN:
            raise ValueError("RATE_CONSTANT_MAX must be >= RATE_CONSTANT_MIN")

        return self

    @property
    def max_workers(self) -> int:
        """Worker count for thread pools"""
        return self.THREADS or os.cpu_count() or 1

    model_config = SettingsConfigDict(
        env_prefix="CRN_CERTIFY_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
    )


settings = Settings()
