"""
Beltrami Lab Configuration Settings
Numerical defaults for the disk discretization, solvers and diagnostics.

Values can be overridden through BELTRAMI_LAB_* environment variables or
config/beltrami.env.
"""

import math
from pathlib import Path
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Main configuration class for the lab.
    Values are loaded from environment variables (prefix BELTRAMI_LAB_).
    """

    model_config = SettingsConfigDict(
        env_prefix="BELTRAMI_LAB_",
        env_file="config/beltrami.env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Application Settings
    APP_NAME: str = "Beltrami Lab"
    APP_VERSION: str = "1.0.0"

    # Grid
    N_THETA: int = Field(default=256)
    RADIAL_PANELS: int = Field(default=8)
    NODES_PER_PANEL: int = Field(default=8)

    # Solver
    P: float = Field(default=2.0)
    INNER_TOL: float = Field(default=1e-10)
    OUTER_TOL: float = Field(default=1e-8)
    MAX_ITER: int = Field(default=200)
    KRYLOV_RESTART: int = Field(default=40)
    PICARD_CONTRACTION_LIMIT: float = 0.9
    POWER_ITERATIONS: int = 6

    # Traces
    TRACE_EXTRAPOLATION_NODES: int = 4
    TRACE_GROWTH_BOUND: float = 1e3

    # Factorization
    ZERO_THRESHOLD: float = 1e-12
    HOLOMORPHY_THRESHOLD: float = 1e-6

    # Analysis
    DENSITY_RIDGE: float = 1e-10
    SECTOR_APERTURE: float = math.pi / 4
    SECTOR_POINTS: int = 64

    # Dense oracle guard
    ORACLE_MAX_N_THETA: int = 64
    ORACLE_MAX_N_RADIAL: int = 24

    # Execution
    THREADS: int = Field(default=1)
    SEED: int = Field(default=0)
    OUTPUT_DIR: Path = Path("output")

    # Logging
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FILE_PATH: str = "logs/beltrami_lab.log"
    LOG_MAX_BYTES: int = 10485760
    LOG_BACKUP_COUNT: int = 5


# Create global settings instance
settings = Settings()


def validate_settings(config: Settings = settings, verbose: bool = True) -> bool:
    """
    Validates that the numerical settings are consistent.

    Args:
        config: Settings instance to check
        verbose: Print the error/warning blocks

    Returns:
        True when no errors were found
    """
    errors = []
    warnings = []

    n = config.N_THETA
    if n < 16 or n & (n - 1):
        errors.append(f"N_THETA must be a power of two >= 16, got {n}")

    if config.RADIAL_PANELS < 1 or config.NODES_PER_PANEL < 2:
        errors.append("RADIAL_PANELS must be >= 1 and NODES_PER_PANEL >= 2")

    if not 1.0 < config.P < math.inf:
        errors.append(f"P must lie in (1, inf), got {config.P}")

    if config.INNER_TOL <= 0 or config.OUTER_TOL <= 0:
        errors.append("INNER_TOL and OUTER_TOL must be positive")
    elif config.OUTER_TOL < 10 * config.INNER_TOL:
        warnings.append("OUTER_TOL should be at least 10x INNER_TOL")

    if not 0 < config.PICARD_CONTRACTION_LIMIT < 1:
        errors.append("PICARD_CONTRACTION_LIMIT must lie in (0, 1)")

    if not 0 < config.SECTOR_APERTURE < math.pi / 2:
        errors.append("SECTOR_APERTURE must lie in (0, pi/2)")

    if config.THREADS < 1:
        errors.append("THREADS must be >= 1")

    if config.TRACE_EXTRAPOLATION_NODES > config.NODES_PER_PANEL * config.RADIAL_PANELS:
        errors.append("TRACE_EXTRAPOLATION_NODES exceeds the radial node count")

    if verbose and errors:
        print("\n=== CONFIGURATION ERRORS ===")
        for error in errors:
            print(f"ERROR: {error}")
        print("===========================\n")

    if verbose and warnings:
        print("\n=== CONFIGURATION WARNINGS ===")
        for warning in warnings:
            print(f"WARNING: {warning}")
        print("==============================\n")

    if not errors:
        if verbose:
            print("\n=== CONFIGURATION VALID ===")
            print(f"Grid: n_theta={config.N_THETA}, radial={config.RADIAL_PANELS}x{config.NODES_PER_PANEL}")
            print(f"Tolerances: inner={config.INNER_TOL}, outer={config.OUTER_TOL}")
            print(f"Threads: {config.THREADS}")
            print("===========================\n")
        return True

    return False


if __name__ == "__main__":
    if validate_settings():
        print("Configuration loaded successfully!")
    else:
        print("Please fix configuration errors before running a solve.")
