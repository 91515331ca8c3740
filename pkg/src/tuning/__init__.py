"""
Tuning module: C_L criterion, factor-number selection and oracle diagnostics.
"""

from .criterion import (
    ScoreEntry,
    TuningGrids,
    TuningResult,
    adjusted_error,
    cl_score,
    default_grids,
    estimate_noise_variance,
    tune,
)
from .factor_count import (
    FactorCountResult,
    SelectionMethod,
    eigenvalue_ratios,
    select_r_er,
    select_r_one_step,
)
from .oracle import (
    OracleAlpha,
    factors_remain_strong,
    loading_risk,
    oracle_alpha,
    risk_derivative,
    shrunk_loading_eigs,
)

__all__ = [
    "ScoreEntry",
    "TuningGrids",
    "TuningResult",
    "adjusted_error",
    "cl_score",
    "default_grids",
    "estimate_noise_variance",
    "tune",
    "FactorCountResult",
    "SelectionMethod",
    "eigenvalue_ratios",
    "select_r_er",
    "select_r_one_step",
    "OracleAlpha",
    "factors_remain_strong",
    "loading_risk",
    "oracle_alpha",
    "risk_derivative",
    "shrunk_loading_eigs",
]
