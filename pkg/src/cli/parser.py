"""
Argument parser for the netfactor subcommands.
"""

import argparse
from pathlib import Path
from typing import Optional, Sequence

from ..telemetry import cpu_count
from .config import RunConfig, build_run_config


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", dest="data_path", type=Path, help="Panel CSV (rows = time)")
    parser.add_argument("--adj", dest="adj_path", type=Path, help="Adjacency CSV")
    parser.add_argument("--adj-format", choices=["edges", "dense"], default="edges")
    parser.add_argument("--one-based", action="store_true", help="Edge list uses 1-based node indices")
    parser.add_argument("--header", action="store_true", help="Panel CSV has a label row")
    parser.add_argument("--standardize", action="store_true", help="Standardize panel columns first")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=["pca", "lap", "proj"], default="pca")
    parser.add_argument("--r", type=int, help="Number of factors")
    parser.add_argument("--k-max", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", type=Path, default=Path("out"))
    parser.add_argument("--threads", type=int, default=cpu_count())


def _add_penalty_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=float, help="Fixed penalty strength (skips tuning)")
    parser.add_argument("--m", type=int, help="Fixed projection dimension")
    parser.add_argument("--auto-tune", action="store_true", help="Tune alpha and m with C_L")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netfactor",
        description="Network-assisted estimation of large-dimensional factor models",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    estimate = commands.add_parser("estimate", help="Fit factors and loadings")
    _add_input_flags(estimate)
    _add_common_flags(estimate)
    _add_penalty_flags(estimate)

    tune = commands.add_parser("tune", help="Select alpha (and m) with the C_L criterion")
    _add_input_flags(tune)
    _add_common_flags(tune)

    select_r = commands.add_parser("select-r", help="Select the number of factors")
    _add_input_flags(select_r)
    _add_common_flags(select_r)
    select_r.add_argument("--max-steps", type=int, default=1, help="One-step-further iterations")

    simulate = commands.add_parser("simulate", help="Run the Monte Carlo study")
    _add_common_flags(simulate)
    simulate.add_argument("--case", dest="cases", type=int, nargs="+", default=[1, 2, 3, 4])
    simulate.add_argument("--p", dest="p_values", type=int, nargs="+", default=[200])
    simulate.add_argument("--T", dest="T_values", type=int, nargs="+", default=[50])
    simulate.add_argument("--reps", type=int, default=500)
    simulate.add_argument("--sigma2", type=float, default=1.0, help="Noise variance of the MSE study")
    simulate.add_argument("--select-sigma2", type=float, default=4.0, help="Noise variance of the r study")
    simulate.add_argument("--study", choices=["mse", "select", "both"], default="both")

    validate = commands.add_parser("validate", help="Rolling recursive validation")
    _add_input_flags(validate)
    _add_common_flags(validate)
    _add_penalty_flags(validate)
    validate.add_argument("--window", type=int, help="Rolling window length")
    validate.add_argument("--retune", action="store_true", help="Re-tune on every window")
    validate.add_argument("--sigma2", dest="sigma2_override", type=float,
                          help="Noise variance for the adjusted error")

    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse argv into a validated RunConfig."""
    namespace = build_parser().parse_args(argv)
    values = {key: value for key, value in vars(namespace).items() if value is not None}
    return build_run_config(**values)
