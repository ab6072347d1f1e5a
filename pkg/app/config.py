"""
Configuration module for the Chebyshev subsampling recovery service

This module manages environment variables and provides configuration settings
for the numerical pipeline, the results database and the API.
"""
from typing import List

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    model_config = SettingsConfigDict(case_sensitive=True, env_file=".env", extra="ignore")

    # API settings
    API_VERSION: str = "v1"
    APP_NAME: str = "Chebyshev Subsampling Recovery"
    DEBUG: bool = False
    CORS_ORIGINS: List[str] = ["*"]
    LOG_LEVEL: str = "INFO"

    # Database settings
    DATABASE_URL: str = "sqlite:///./recovery_runs.db"

    # Sampling
    DEFAULT_SEED: int = 20230601
    BUDGET_FACTOR: float = 4.0  # M = ceil(BUDGET_FACTOR * m * ln m)

    # Subsampling
    OVERSAMPLING_FACTOR: float = 1.1
    SUBSAMPLE_BLOCK: int = 128
    SUBSAMPLE_SELECTION: str = "first"  # first, best
    GUARANTEE_TOLERANCE: float = 1e-9

    # Recovery and error estimation
    RANK_THRESHOLD: float = 1e-10
    PARSEVAL_CUTOFF: int = 100_000
    MC_POINTS: int = 1_000_000
    MC_CHUNK: int = 20_000

    # Experiments
    DEFAULT_REPEATS: int = 3
    EXPECTED_RATE: float = 2.5


# Create settings instance
settings = Settings()


def validate_settings(config: Settings = settings) -> None:
    """Validate that numerical settings are consistent"""
    if config.OVERSAMPLING_FACTOR <= 1.0:
        raise ValueError("OVERSAMPLING_FACTOR must be greater than 1")
    if config.BUDGET_FACTOR <= 0:
        raise ValueError("BUDGET_FACTOR must be positive")
    if config.SUBSAMPLE_SELECTION not in ("first", "best"):
        raise ValueError("SUBSAMPLE_SELECTION must be 'first' or 'best'")
    if config.SUBSAMPLE_BLOCK < 1:
        raise ValueError("SUBSAMPLE_BLOCK must be at least 1")
    if config.PARSEVAL_CUTOFF < 8:
        raise ValueError("PARSEVAL_CUTOFF must be at least 8")
    if config.MC_POINTS < 100:
        raise ValueError("MC_POINTS must be at least 100")


validate_settings()
