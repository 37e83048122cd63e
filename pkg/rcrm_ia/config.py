"""Runtime settings.

These knobs control logging and parallelism only. Numeric parameters of an
experiment live in the experiment file (see ``rcrm_ia.harness.experiment``)
and are never read from the environment.
"""
from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application settings
    PROJECT_NAME: str = "rcrm-ia"
    VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = Field("INFO", description="Level of the package logger")
    LOG_DIR: Optional[str] = Field(None, description="Directory for rcrm_ia.log; console only when unset")

    # Monte-Carlo workers used when an experiment file does not set one
    WORKERS: int = Field(1, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="RCRM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings."""
    return Settings()


# Global settings instance
settings = get_settings()
