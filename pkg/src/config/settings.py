"""
Configuration settings for the Reward Peak Explainer
"""
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with validation"""

    model_config = SettingsConfigDict(
        env_prefix="PEAKMAP_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Configuration
    app_name: str = "Reward Peak Explainer"
    app_version: str = "1.0.0"
    log_level: str = "WARNING"

    # Tie handling for best_next, dominance and greedy actions
    tie_rel_tol: float = 1e-12
    tie_abs_tol: float = 1e-15

    # Peak height solver
    solver_tol: float = 1e-13
    solver_max_sweeps: int = 1_000_000
    solver_stable_sweeps: int = 2

    # Value-iteration oracle
    oracle_tol: float = 1e-12
    oracle_max_sweeps: int = 200_000
    check_budget: float = 1e-8

    # Output
    float_digits: int = 12
    ppm_scale: int = 1

    # Greedy path tracing gives up after path_step_factor * |S| steps
    path_step_factor: int = 4

    @field_validator(
        "tie_rel_tol", "tie_abs_tol", "solver_tol", "oracle_tol", "check_budget"
    )
    @classmethod
    def tolerance_must_be_positive(cls, v):
        if v <= 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("float_digits")
    @classmethod
    def digits_in_range(cls, v):
        if not 1 <= v <= 17:
            raise ValueError("float_digits must be between 1 and 17")
        return v

    @field_validator("solver_max_sweeps", "oracle_max_sweeps", "ppm_scale", "path_step_factor")
    @classmethod
    def count_must_be_positive(cls, v):
        if v < 1:
            raise ValueError("counts must be at least 1")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Grid moves in action order: (name, dx, dy). y grows upward, so Up is +1.
GRID_MOVES = (
    ("Up", 0, 1),
    ("Down", 0, -1),
    ("Left", -1, 0),
    ("Right", 1, 0),
)

# Region colours, indexed by the rank of a cycle peak in peak-id order
PEAK_PALETTE = (
    (230, 25, 75),    # red
    (60, 180, 75),    # green
    (0, 130, 200),    # blue
    (255, 225, 25),   # yellow
    (245, 130, 48),   # orange
    (145, 30, 180),   # purple
    (70, 240, 240),   # cyan
    (240, 50, 230),   # magenta
    (210, 245, 60),   # lime
    (250, 190, 212),  # pink
    (0, 128, 128),    # teal
    (170, 110, 40),   # brown
)
CO_DOMINANT_COLOR = (0, 0, 0)

SYMBOL_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz"
    "0123456789"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
)
