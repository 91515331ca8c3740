"""
Monte Carlo configuration.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..tuning import TuningGrids, default_grids

# Nodes reserved for the trailing eigen-block (case 2) or isolated nodes (case 4)
TRAILING_BLOCK = 50
# Number of groups in case 3
N_GROUPS = 50


class SimulationConfig(BaseModel):
    """One simulation setting (case, p, T) and how to run it."""

    model_config = ConfigDict(frozen=True)

    case: Literal[1, 2, 3, 4]
    p: int = Field(gt=0)
    T: int = Field(gt=0)
    r: int = Field(default=3, gt=0)
    sigma_e2: float = Field(default=1.0, gt=0)
    select_sigma_e2: float = Field(default=4.0, gt=0)
    reps: int = Field(default=500, gt=0)
    seed: int = 0
    k_max: int = Field(default=10, gt=0)
    study: Literal["mse", "select", "both"] = "both"
    alphas: Optional[tuple[float, ...]] = None
    ms: Optional[tuple[int, ...]] = None
    n_jobs: int = Field(default=1, gt=0)

    @model_validator(mode="after")
    def check_dimensions(self) -> "SimulationConfig":
        if self.r >= min(self.T, self.p):
            raise ValueError(f"r must be < min(T, p) = {min(self.T, self.p)}, got {self.r}")
        if self.T < 3 or self.p < 3:
            raise ValueError(f"T and p must be >= 3, got T={self.T}, p={self.p}")
        if self.case in (2, 4) and self.p <= TRAILING_BLOCK:
            raise ValueError(f"case {self.case} requires p > {TRAILING_BLOCK}, got {self.p}")
        if self.case == 3 and self.p < N_GROUPS:
            raise ValueError(f"case 3 requires p >= {N_GROUPS}, got {self.p}")
        if self.study != "mse" and self.k_max + 1 > min(self.T, self.p):
            raise ValueError(f"k_max must be < min(T, p) = {min(self.T, self.p)}, got {self.k_max}")
        if self.alphas is not None and any(a < 0 for a in self.alphas):
            raise ValueError("alpha grid values must be >= 0")
        if self.ms is not None and any(not 0 <= m <= self.p for m in self.ms):
            raise ValueError(f"m grid values must lie in [0, {self.p}]")
        return self

    @property
    def runs_mse(self) -> bool:
        return self.study in ("mse", "both")

    @property
    def runs_select(self) -> bool:
        return self.study in ("select", "both")

    def tuning_grids(self) -> TuningGrids:
        defaults = default_grids(self.p)
        return TuningGrids(
            alphas=self.alphas if self.alphas is not None else defaults.alphas,
            ms=self.ms if self.ms is not None else defaults.ms,
        )
