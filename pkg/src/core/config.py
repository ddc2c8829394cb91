# src/core/config.py
from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Process-wide settings with validation"""

    # ==================== APPLICATION ====================
    APP_NAME: str = "Twin Beam Simulator"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: Literal["development", "staging", "production"] = "development"
    DEBUG: bool = Field(default=False)

    # ==================== LOGGING ====================
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    LOG_DIR: Path = Field(default=Path("./logs"))

    # ==================== COMPUTE ====================
    WORKER_THREADS: int = Field(default=1, ge=1)
    MAX_TRIPLETS: int = Field(default=50_000_000, ge=1)
    TRIPLET_BLOCK_ENTRIES: int = Field(default=1_000_000, ge=1)

    # ==================== GRIDS ====================
    DEFAULT_N_OMEGA: int = Field(default=512, ge=8)
    DEFAULT_N_K: int = Field(default=256, ge=8)
    MAX_AZIMUTHAL_ORDER: int = Field(default=4096, ge=64)
    MAX_SPAN_DOUBLINGS: int = Field(default=12, ge=1)
    EDGE_TOLERANCE: float = Field(default=1e-4, gt=0.0, lt=1.0)

    # ==================== TRUNCATION ====================
    TRUNCATION_MASS: float = Field(default=1e-4, gt=0.0, lt=1.0)
    FAMILY_TRUNCATION_MASS: float = Field(default=1e-6, gt=0.0, lt=1.0)

    # ==================== SOLVERS ====================
    BISECTION_TOLERANCE_RAD: float = Field(default=1e-6, gt=0.0)
    CALIBRATION_RTOL: float = Field(default=1e-3, gt=0.0)
    RK4_TOLERANCE: float = Field(default=1e-10, gt=0.0)
    FOCK_MAX_CUTOFF: int = Field(default=60, ge=1)
    FOCK_TAIL_TOLERANCE: float = Field(default=1e-6, gt=0.0)

    # ==================== OUTPUT ====================
    OUTPUT_DIR: Path = Field(default=Path("./output"))

    @field_validator("LOG_DIR")
    def create_log_dir(cls, value: Path) -> Path:
        """Create log directory if not exists"""
        value.mkdir(parents=True, exist_ok=True)
        return value

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


@lru_cache
def get_settings() -> Settings:
    """Cached settings instance"""
    return Settings()


settings = get_settings()
