"""Application configuration settings."""
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from toeplab import __version__

RNG_ALGORITHMS = ("PCG64", "PCG64DXSM", "Philox", "SFC64", "MT19937")


class Settings(BaseSettings):
    """Laboratory settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore"
    )

    # Application
    APP_NAME: str = "toeplab"
    APP_VERSION: str = __version__
    ENVIRONMENT: str = "development"
    LOG_LEVEL: str = "INFO"

    # Quadrature
    QUADRATURE_NODES: int = 80
    QUADRATURE_MAX_POINTS: int = 2_000_000

    # Tolerances
    TOL_CLOSED_FORM: float = 1e-13
    TOL_NUMERIC: float = 1e-8
    TOL_COMMUTE: float = 1e-9
    SEPARATION_FLOOR: float = 1e-3
    TOL_ORACLE: float = 1e-6
    TOL_GEOMETRY: float = 1e-12
    TOL_BRACKET: float = 1e-8

    # Monte-Carlo
    MC_SAMPLES: int = 2_000_000
    MC_BATCH_SIZE: int = 100_000
    RNG_ALGORITHM: str = "PCG64"
    DEFAULT_SEED: int = 20240917

    # Runner
    OUTPUT_DIR: str = "out"
    MAX_WORKERS: int = 4

    @field_validator("QUADRATURE_NODES")
    @classmethod
    def validate_nodes(cls, v: int) -> int:
        """Validate the per-axis node count."""
        if v < 8:
            raise ValueError("QUADRATURE_NODES must be at least 8")
        return v

    @field_validator("MC_SAMPLES")
    @classmethod
    def validate_samples(cls, v: int) -> int:
        """Validate the Monte-Carlo sample count."""
        if v < 10_000:
            raise ValueError("MC_SAMPLES must be at least 10000")
        return v

    @field_validator("RNG_ALGORITHM")
    @classmethod
    def validate_rng_algorithm(cls, v: str) -> str:
        """Validate the bit generator name against numpy's generators."""
        if v not in RNG_ALGORITHMS:
            raise ValueError(f"RNG_ALGORITHM must be one of: {', '.join(RNG_ALGORITHMS)}")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level name."""
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"LOG_LEVEL must be one of: {', '.join(allowed)}")
        return v.upper()

    @field_validator("ENVIRONMENT")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        """Validate environment is one of the allowed values."""
        allowed = ["development", "testing", "production"]
        if v.lower() not in allowed:
            raise ValueError(f"ENVIRONMENT must be one of: {', '.join(allowed)}")
        return v.lower()

    @property
    def is_production(self) -> bool:
        """Check if running in production environment."""
        return self.ENVIRONMENT == "production"


# Global settings instance
settings = Settings()
