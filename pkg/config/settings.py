from typing import Any, List

from pydantic import BaseSettings, Field, validator


class Settings(BaseSettings):
    """Runtime configuration and defaults table for the Wiener-Hopf toolkit."""

    log_level: str = Field(default="WARNING", env="WH_LOG_LEVEL")

    ar_order: int = Field(default=64, env="WH_AR_ORDER")
    min_truncation: int = Field(default=64, env="WH_MIN_TRUNCATION")
    truncation_factor: int = Field(default=4, env="WH_TRUNCATION_FACTOR")
    grid_factor: int = Field(default=8, env="WH_GRID_FACTOR")
    default_max_lag: int = Field(default=128, env="WH_MAX_LAG")

    tail_tolerance: float = Field(default=1e-12, env="WH_TAIL_TOL")
    max_kernel_length: int = Field(default=65_536, env="WH_MAX_KERNEL")
    factorization_tolerance: float = Field(default=1e-6, env="WH_FACTOR_TOL")
    solve_tolerance: float = Field(default=1e-8, env="WH_SOLVE_TOL")
    grid_route_tolerance: float = Field(default=1e-8, env="WH_GRID_ROUTE_TOL")
    residual_padding: int = Field(default=20, env="WH_RESIDUAL_PADDING")

    window_factor: int = Field(default=4, env="WH_WINDOW_FACTOR")
    window_tail_tolerance: float = Field(default=1e-8, env="WH_WINDOW_TAIL_TOL")
    dense_n: int = Field(default=400, env="WH_DENSE_N")

    p_list: List[int] = Field(default_factory=lambda: [2, 4, 8, 16, 32])
    smoothness_k: float = Field(default=3.0, env="WH_SMOOTHNESS_K")
    study_workers: int = Field(default=1, env="WH_STUDY_WORKERS")

    metrics_textfile: str = Field(default="", env="WH_METRICS_TEXTFILE")

    class Config:
        env_file = ".env"

    @validator(
        "tail_tolerance",
        "factorization_tolerance",
        "solve_tolerance",
        "grid_route_tolerance",
        "window_tail_tolerance",
    )
    def _positive_tolerance(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value

    @validator("ar_order", "min_truncation", "truncation_factor", "grid_factor", "dense_n")
    def _positive_size(cls, value: int) -> int:
        if value < 1:
            raise ValueError("sizes and orders must be at least 1")
        return value

    def __init__(self, **kwargs: Any) -> None:
        super().__init__(**kwargs)
        self.log_level = self.log_level.upper()


def load_settings() -> Settings:
    return Settings()


settings = load_settings()
