"""Application configuration using Pydantic Settings.

Settings come from environment variables prefixed with ``GOPPA_`` or from a
``.env`` file in the working directory. Command-line flags override a subset
of them per run (see ``goppa_bounds.cli.parser``).

Example:
    GOPPA_CACHE_DIR=~/.cache/goppa GOPPA_ORACLE_BUDGET_BITS=26 goppa-bounds verify --q 2 --n 5 --r 5
"""

from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="GOPPA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        frozen=True,
    )

    # Application
    debug: bool = False

    # Environment
    environment: Literal["development", "production", "testing"] = "development"

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    log_format: Literal["json", "console"] = "console"

    # Field towers
    cache_dir: Optional[Path] = None
    log_table_max_bits: int = Field(default=24, ge=8, le=31)

    # Enumeration budgets
    oracle_budget_bits: int = Field(default=26, ge=4, le=32)
    matrix_budget_order: int = Field(default=32, ge=2, le=64)

    # Oracle parallelism
    workers: int = Field(default=4, ge=1, le=256)
    chunk_size: int = Field(default=1 << 20, ge=1 << 10)

    # Output files (parity matrices, partition dumps)
    output_dir: Path = Path("out")

    @property
    def effective_log_level(self) -> str:
        """Return DEBUG if debug mode, otherwise configured log_level."""
        return "DEBUG" if self.debug else self.log_level

    @property
    def effective_log_format(self) -> str:
        """Return json for production, otherwise configured log_format."""
        if self.environment == "production":
            return "json"
        return self.log_format

    @property
    def oracle_budget(self) -> int:
        """Largest tower order the oracle will enumerate."""
        return 1 << self.oracle_budget_bits

    @property
    def log_table_max_order(self) -> int:
        """Largest tower order served by the log/antilog backend under ``auto``."""
        return 1 << self.log_table_max_bits


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Get cached settings instance (singleton pattern)."""
    return Settings()
