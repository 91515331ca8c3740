"""
Run configuration assembled from command-line flags.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..errors import ConfigError

Command = Literal["estimate", "tune", "select-r", "simulate", "validate"]
Method = Literal["pca", "lap", "proj"]

DATA_COMMANDS = ("estimate", "tune", "select-r", "validate")


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Command
    data_path: Optional[Path] = None
    adj_path: Optional[Path] = None
    adj_format: Literal["edges", "dense"] = "edges"
    one_based: bool = False
    header: bool = False
    standardize: bool = False
    method: Method = "pca"
    r: Optional[int] = Field(default=None, gt=0)
    k_max: int = Field(default=10, gt=0)
    window: Optional[int] = Field(default=None, gt=0)
    alpha: Optional[float] = Field(default=None, ge=0)
    m: Optional[int] = Field(default=None, ge=0)
    auto_tune: bool = False
    retune: bool = False
    sigma2_override: Optional[float] = Field(default=None, ge=0)
    max_steps: int = Field(default=1, gt=0)
    seed: int = 0
    out_dir: Path = Path("out")
    threads: int = Field(default=1, gt=0)

    # simulate
    cases: list[Literal[1, 2, 3, 4]] = Field(default_factory=lambda: [1, 2, 3, 4])
    p_values: list[int] = Field(default_factory=lambda: [200])
    T_values: list[int] = Field(default_factory=lambda: [50])
    reps: int = Field(default=500, gt=0)
    sigma2: float = Field(default=1.0, gt=0)
    select_sigma2: float = Field(default=4.0, gt=0)
    study: Literal["mse", "select", "both"] = "both"

    @model_validator(mode="after")
    def check_command(self) -> "RunConfig":
        if self.command in DATA_COMMANDS:
            if self.data_path is None or self.adj_path is None:
                raise ValueError(f"{self.command} requires --data and --adj")

        if self.command in ("estimate", "tune", "validate") and self.r is None:
            raise ValueError(f"{self.command} requires --r")

        if self.command == "tune" and self.method == "pca":
            raise ValueError("tune requires --method lap or proj")

        if self.command == "estimate" and self.method != "pca" and not self.auto_tune:
            if self.alpha is None:
                raise ValueError("estimate with a penalty requires --alpha or --auto-tune")
            if self.method == "proj" and self.m is None:
                raise ValueError("estimate with --method proj requires --m or --auto-tune")

        if self.command == "validate":
            if self.window is None:
                raise ValueError("validate requires --window")
            if self.method == "proj" and self.alpha is not None and self.m is None:
                raise ValueError("validate with a fixed --alpha for proj also requires --m")

        if self.command == "simulate":
            if not self.cases or not self.p_values or not self.T_values:
                raise ValueError("simulate requires at least one --case, --p and --T")
        return self

    @property
    def fixed_alpha(self) -> Optional[float]:
        """Explicit alpha unless --auto-tune asks for C_L tuning."""
        return None if self.auto_tune else self.alpha


def build_run_config(**values) -> RunConfig:
    """Validate flag values, turning pydantic errors into ConfigError."""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        message = first.get("msg", str(e))
        raise ConfigError(f"{location}: {message}" if location else message) from None
