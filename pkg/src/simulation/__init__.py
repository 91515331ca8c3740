"""
Simulation module: data-generating processes and the Monte Carlo runner.
"""

from .analytic import group_sizes, grouped_network_mse, grouped_spectrum
from .config import SimulationConfig
from .dgp import banded_mixing, gen_errors, gen_factors, gen_loadings, gen_network, orthonormal_columns
from .metrics import MseSummary, SelectionSummary, mse_common
from .runner import (
    MSE_METHODS,
    SELECT_METHODS,
    TABLE_COLUMNS,
    ReplicationResult,
    SimulationReport,
    replication_rng,
    run_case,
    run_replication,
)

__all__ = [
    "group_sizes",
    "grouped_network_mse",
    "grouped_spectrum",
    "SimulationConfig",
    "banded_mixing",
    "gen_errors",
    "gen_factors",
    "gen_loadings",
    "gen_network",
    "orthonormal_columns",
    "MseSummary",
    "SelectionSummary",
    "mse_common",
    "MSE_METHODS",
    "SELECT_METHODS",
    "TABLE_COLUMNS",
    "ReplicationResult",
    "SimulationReport",
    "replication_rng",
    "run_case",
    "run_replication",
]
