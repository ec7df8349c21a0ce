"""
SL3 Extension Engine - Configuration
"""
from functools import lru_cache
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine settings loaded from environment variables."""

    # API Info
    api_title: str = "SL3 Extension Engine"
    api_description: str = "Exact decision and construction of SL3-extensions of unimodular 2x2 matrices over commutative rings"
    api_version: str = "1.0.0"
    debug: bool = False

    # Search bounds
    default_search_bound: int = 64
    quadratic_search_bound: int = 6
    stable_range_cap: int = 40
    stable_range_candidates: int = 20_000

    # Finite ring limits
    ring_size_cap: int = 64
    finite_search_cap: int = 4096
    enumeration_bound_cap: int = 200

    # Cache sizes (entries) and TTL (seconds)
    ring_cache_size: int = 256
    verdict_cache_size: int = 200_000
    report_cache_ttl: int = 600

    # Parallel ring sweeps (1 = in-process)
    sweep_workers: int = 1

    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SL3EXT_",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
