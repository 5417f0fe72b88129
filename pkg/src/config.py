"""Configuration management for Cremona Distortion."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library settings loaded from environment variables (prefix CREMONA_)."""

    model_config = SettingsConfigDict(
        env_file=".env", env_prefix="CREMONA_", env_file_encoding="utf-8", extra="ignore"
    )

    # Iteration caps
    degree_cap: int = 4096
    term_cap: int = 200_000
    compose_cache_size: int = 4096

    # Ball enumeration caps
    max_elements: int = 10_000_000
    max_coefficient_bits: int = 4096
    max_birmap_degree: int = 64
    power_cap: int = 1_000_000
    power_patience: int = 16

    # Growth classification
    growth_min_length: int = 8
    exponential_margin: float = 0.05
    polynomial_tail_fraction: float = 0.5
    max_period: int = 4

    # Randomized search
    default_seed: int = 20240229
    workers: int = 1
    witness_budget: int = 10_000
    witness_chunk_size: int = 16
    witness_patience: int = 4
    witness_tolerance: float = 1e-9

    # Digit expansion
    digit_radius: int = 1
    digit_bound: float = 1.5
    digit_attempts: int = 4

    # Homeomorphism model
    homeo_max_bits: int = 1_000_000
    homeo_extra_digits: int = 30

    # Word heights
    word_height_chunk_size: int = 50

    # Reports
    report_schema_version: str = "1.0"
    report_indent: int = 2

    # Logging
    log_level: str = "INFO"


# Global settings instance
settings = Settings()
