"""
Command-line surface, file ingestion and report emission.
"""

from .commands import COMMAND_HANDLERS, main, run_command
from .config import RunConfig, build_run_config
from .io import PanelData, load_adjacency, load_panel_csv, write_matrix_csv
from .parser import build_parser, parse_args
from .reports import EstimateReport, SelectionReport, SimulationTable, write_report

__all__ = [
    "COMMAND_HANDLERS",
    "main",
    "run_command",
    "RunConfig",
    "build_run_config",
    "PanelData",
    "load_adjacency",
    "load_panel_csv",
    "write_matrix_csv",
    "build_parser",
    "parse_args",
    "EstimateReport",
    "SelectionReport",
    "SimulationTable",
    "write_report",
]
