"""
Command handlers and the top-level CLI entry point.
"""

import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from threadpoolctl import threadpool_limits

from ..estimation import PenaltyKind, fit, identity_operator, kind_for_method, shrink_weights
from ..graph import laplacian_spectrum
from ..sentry import capture_exception, set_run_context
from ..simulation import SimulationConfig, run_case
from ..tuning import (
    adjusted_error,
    cl_score,
    estimate_noise_variance,
    select_r_er,
    select_r_one_step,
    tune,
)
from ..validation import recursive_validate, standardize
from .config import RunConfig
from .io import PanelData, load_adjacency, load_panel_csv
from .parser import parse_args
from .reports import EstimateReport, SelectionReport, SimulationTable, write_report

logger = logging.getLogger(__name__)


def _load_inputs(config: RunConfig):
    panel = load_panel_csv(config.data_path, header=config.header)
    net = load_adjacency(config.adj_path, config.adj_format, panel.p, one_based=config.one_based)
    spec = laplacian_spectrum(net)
    values = standardize(panel.values) if config.standardize else panel.values
    return PanelData(values=values, labels=panel.labels), spec


def handle_estimate(config: RunConfig) -> list[Path]:
    """Fit one estimator and write F, B, C and its scores."""
    panel, spec = _load_inputs(config)
    X = panel.values
    kind = kind_for_method(config.method)
    tuned = False

    if kind == PenaltyKind.NONE:
        op = identity_operator(spec)
    elif config.fixed_alpha is None:
        op = tune(X, spec, kind, config.r).operator
        tuned = True
    else:
        op = shrink_weights(spec, kind, config.alpha, config.m or 0)

    est = fit(X, spec, op, config.r)
    sigma2 = estimate_noise_variance(X, spec, config.r)
    report = EstimateReport(
        method=config.method,
        estimate=est,
        sigma2_hat=sigma2,
        cl_score=cl_score(X, est, op, sigma2, config.r),
        adjusted_error=adjusted_error(X, est, op, sigma2, config.r),
        tuned=tuned,
        labels=panel.labels,
    )
    return write_report(report, config.out_dir)


def handle_tune(config: RunConfig) -> list[Path]:
    """Run the C_L grid search and write the score table."""
    panel, spec = _load_inputs(config)
    result = tune(panel.values, spec, kind_for_method(config.method), config.r)
    logger.info(f"Selected alpha={result.alpha_star:g}, m={result.m_star}")
    return write_report(result, config.out_dir)


def handle_select_r(config: RunConfig) -> list[Path]:
    """Select the factor number (ER for pca, one step further otherwise)."""
    panel, spec = _load_inputs(config)
    kind = kind_for_method(config.method)

    if kind == PenaltyKind.NONE:
        result = select_r_er(panel.values, spec, k_max=config.k_max)
    else:
        result = select_r_one_step(
            panel.values, spec, kind, k_max=config.k_max, max_steps=config.max_steps
        )
    logger.info(f"Selected r={result.r_hat} ({result.method})")
    return write_report(SelectionReport(result=result, k_max=config.k_max), config.out_dir)


def handle_simulate(config: RunConfig) -> list[Path]:
    """Run every requested (case, p, T) setting and write one table."""
    table = SimulationTable()
    for case in config.cases:
        for p in config.p_values:
            for T in config.T_values:
                setting = SimulationConfig(
                    case=case,
                    p=p,
                    T=T,
                    r=config.r or 3,
                    sigma_e2=config.sigma2,
                    select_sigma_e2=config.select_sigma2,
                    reps=config.reps,
                    seed=config.seed,
                    k_max=config.k_max,
                    study=config.study,
                    n_jobs=config.threads,
                )
                table.reports.append(run_case(setting))
    return write_report(table, config.out_dir)


def handle_validate(config: RunConfig) -> list[Path]:
    """Rolling validation of one estimator."""
    panel, spec = _load_inputs(config)
    report = recursive_validate(
        panel.values,
        spec,
        config.method,
        window=config.window,
        r=config.r,
        alpha=config.fixed_alpha,
        m=config.m,
        retune=config.retune,
        sigma2=config.sigma2_override,
    )
    return write_report(report, config.out_dir)


# Command registry
COMMAND_HANDLERS: dict[str, Callable[[RunConfig], list[Path]]] = {
    "estimate": handle_estimate,
    "tune": handle_tune,
    "select-r": handle_select_r,
    "simulate": handle_simulate,
    "validate": handle_validate,
}


def run_command(config: RunConfig) -> list[Path]:
    handler = COMMAND_HANDLERS[config.command]
    if config.command == "simulate":
        # Replications pin their own BLAS threads
        return handler(config)
    with threadpool_limits(limits=config.threads):
        return handler(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run the command and report errors on one stderr line.

    Returns:
        Process exit code (0 on success, 1 on any error)
    """
    try:
        config = parse_args(argv)
        set_run_context(config.command, config.seed)

        logger.info("=" * 50)
        logger.info(f"NetFactor {config.command}")
        logger.info("=" * 50)

        paths = run_command(config)
        for path in paths:
            logger.info(f"  wrote {path}")
        return 0

    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        capture_exception(e, argv=list(argv) if argv is not None else sys.argv[1:])
        message = str(e).replace("\n", " ")
        print(f"netfactor:error:{type(e).__name__}:{message}", file=sys.stderr)
        return 1
