"""
JSON payloads written by the CLI.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict


class Payload(BaseModel):
    # Infinite ratios and unbounded alphas are written as "Infinity"
    model_config = ConfigDict(ser_json_inf_nan="strings")


class EstimateSummary(Payload):
    type: Literal['estimate'] = 'estimate'
    method: str
    r: int
    alpha: float
    m: Optional[int] = None
    sigma2_hat: float
    cl_score: float
    adjusted_error: float
    trace_d_inv: float
    eigenvalues: list[float]  # Leading r eigenvalues of (pT)^-1 X D^-1 X^T
    explained_variability: float
    degenerate_gap: bool
    tuned: bool
    labels: Optional[list[str]] = None


class ScoreRow(BaseModel):
    alpha: float
    m: Optional[int] = None
    score: float


class TuneSummary(Payload):
    type: Literal['tune'] = 'tune'
    method: str
    r: int
    alpha: float
    m: Optional[int] = None
    sigma2_hat: float
    cl_score: float
    grid_size: int


class SelectRSummary(Payload):
    type: Literal['select_r'] = 'select_r'
    method: str
    r_hat: int
    k_max: int
    ratios: list[float]
    eigenvalues: list[float]
    r_history: list[int]
    converged: bool
    alpha: Optional[float] = None
    m: Optional[int] = None


class SimulationSetting(BaseModel):
    config: dict  # Echo of SimulationConfig
    rows: list[dict]
    selection: dict[str, str]  # a(b|c) strings per selector


class SimulationSummary(Payload):
    type: Literal['simulate'] = 'simulate'
    settings: list[SimulationSetting]


class ValidationSummary(Payload):
    type: Literal['validate'] = 'validate'
    method: str
    window: int
    r: int
    alpha: float
    m: Optional[int] = None
    retune: bool
    n_steps: int
    ave_mse: float
    ave_r2: float
    var_b: float
    adj_error: float
    sigma2_hat: float
    trace_d_inv: float
