from functools import lru_cache
import logging
from typing import Optional

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",  # Ignore extra environment variables
    )

    # Project
    PROJECT_NAME: str = "fullrank-lines"
    VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "colored"
    LOG_FILE: Optional[str] = None

    # 元素枚举预算 / element iteration budget
    ELEMENT_BUDGET: int = 2**24
    RANDOM_SEARCH_BUDGET: int = 10_000
    SIDE_CONDITION_BUDGET: int = 2**20

    # Randomness
    DEFAULT_SEED: int = 0

    # Campaign workers
    WORKERS: int = 1
    WORKER_QUEUE_SIZE: int = 64

    # 穷举上限，超过后改为抽样 / exhaustive ceiling before sampling fallback
    MAX_EXHAUSTIVE_CASES: int = 200_000
    SAMPLE_FALLBACK_COUNT: int = 10_000

    # Fields
    MAX_MODULUS: int = 65_536
    GF2_PACKED: bool = True

    @field_validator(
        "ELEMENT_BUDGET",
        "RANDOM_SEARCH_BUDGET",
        "SIDE_CONDITION_BUDGET",
        "WORKERS",
        "WORKER_QUEUE_SIZE",
        "MAX_EXHAUSTIVE_CASES",
        "SAMPLE_FALLBACK_COUNT",
        "MAX_MODULUS",
    )
    @classmethod
    def must_be_positive(cls, v: int) -> int:
        if v <= 0:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("DEFAULT_SEED")
    @classmethod
    def seed_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("seed must be non-negative")
        return v

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def parse_log_level(cls, v: str) -> str:
        level = str(v).strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level: {v}")
        return level

    @field_validator("LOG_FORMAT")
    @classmethod
    def parse_log_format(cls, v: str) -> str:
        if v not in ("colored", "json"):
            raise ValueError("LOG_FORMAT must be one of: colored, json")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
