"""
Report emission: one write_report entry point for every result type.
"""

import logging
from dataclasses import dataclass, field
from functools import singledispatch
from pathlib import Path
from typing import Optional

import pandas as pd
from pydantic import BaseModel

from ..errors import ReportError
from ..estimation import FactorEstimate, PenaltyKind, explained_variability
from ..sentry import TracingContext
from ..simulation import TABLE_COLUMNS, SimulationReport
from ..tuning import FactorCountResult, TuningResult
from ..validation import ValidationReport
from .io import FLOAT_FORMAT, write_matrix_csv
from .schemas import (
    EstimateSummary,
    ScoreRow,
    SelectRSummary,
    SimulationSetting,
    SimulationSummary,
    TuneSummary,
    ValidationSummary,
)

logger = logging.getLogger(__name__)


@dataclass
class EstimateReport:
    """A fitted estimate with the scores the estimate command reports."""

    method: str
    estimate: FactorEstimate
    sigma2_hat: float
    cl_score: float
    adjusted_error: float
    tuned: bool = False
    labels: Optional[list[str]] = None


@dataclass
class SelectionReport:
    result: FactorCountResult
    k_max: int


@dataclass
class SimulationTable:
    """Reports of every simulated setting, written as one table."""

    reports: list[SimulationReport] = field(default_factory=list)

    def rows(self) -> list[dict]:
        return [row for report in self.reports for row in report.rows()]


def _prepare(out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ReportError(str(e), path=str(out_dir)) from e
    return out_dir


def _write_json(path: Path, payload: BaseModel) -> Path:
    try:
        path.write_text(payload.model_dump_json(indent=2) + "\n")
    except OSError as e:
        raise ReportError(str(e), path=str(path)) from e
    return path


def _write_frame(path: Path, frame: pd.DataFrame) -> Path:
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    except OSError as e:
        raise ReportError(str(e), path=str(path)) from e
    return path


@singledispatch
def write_report(report, out_dir: Path) -> list[Path]:
    """
    Write a result to out_dir.

    Args:
        report: EstimateReport, TuningResult, SelectionReport,
            SimulationTable/SimulationReport or ValidationReport
        out_dir: Output directory (created if missing)

    Returns:
        Paths of the files written
    """
    raise ReportError(f"no writer for {type(report).__name__}")


@write_report.register
def _(report: EstimateReport, out_dir: Path) -> list[Path]:
    out_dir = _prepare(out_dir)
    est = report.estimate
    op = est.operator

    with TracingContext(op="io", description="write_estimate") as span:
        summary = EstimateSummary(
            method=report.method,
            r=est.r,
            alpha=op.alpha,
            m=op.m if op.kind == PenaltyKind.PROJECTION else None,
            sigma2_hat=report.sigma2_hat,
            cl_score=report.cl_score,
            adjusted_error=report.adjusted_error,
            trace_d_inv=op.trace_inv,
            eigenvalues=est.eigvals.tolist(),
            explained_variability=explained_variability(est, est.r),
            degenerate_gap=est.degenerate_gap,
            tuned=report.tuned,
            labels=report.labels,
        )
        paths = [
            write_matrix_csv(out_dir / "F.csv", est.scores),
            write_matrix_csv(out_dir / "B.csv", est.loadings),
            write_matrix_csv(out_dir / "C.csv", est.common),
            _write_json(out_dir / "report.json", summary),
        ]
        span.set_data("files", len(paths))

    logger.info(f"Estimate written to {out_dir}")
    return paths


@write_report.register
def _(report: TuningResult, out_dir: Path) -> list[Path]:
    out_dir = _prepare(out_dir)
    method = "lap" if report.kind == PenaltyKind.LAPLACIAN else "proj"

    summary = TuneSummary(
        method=method,
        r=report.r,
        alpha=report.alpha_star,
        m=report.m_star,
        sigma2_hat=report.sigma2_hat,
        cl_score=report.best_score,
        grid_size=len(report.score_table),
    )
    scores = pd.DataFrame(
        [ScoreRow(alpha=e.alpha, m=e.m, score=e.score).model_dump() for e in report.score_table],
        columns=["alpha", "m", "score"],
    )
    scores["m"] = scores["m"].astype("Int64")

    paths = [
        _write_json(out_dir / "tune.json", summary),
        _write_frame(out_dir / "scores.csv", scores),
    ]
    logger.info(f"Tuning result written to {out_dir}")
    return paths


@write_report.register
def _(report: SelectionReport, out_dir: Path) -> list[Path]:
    out_dir = _prepare(out_dir)
    result = report.result
    tuning = result.tuning

    summary = SelectRSummary(
        method=result.method,
        r_hat=result.r_hat,
        k_max=report.k_max,
        ratios=result.ratios.tolist(),
        eigenvalues=result.eigvals[: report.k_max + 1].tolist(),
        r_history=list(result.r_history),
        converged=result.converged,
        alpha=tuning.alpha_star if tuning else None,
        m=tuning.m_star if tuning else None,
    )
    return [_write_json(out_dir / "select_r.json", summary)]


@write_report.register
def _(report: SimulationTable, out_dir: Path) -> list[Path]:
    out_dir = _prepare(out_dir)

    with TracingContext(op="io", description="write_simulation") as span:
        table = pd.DataFrame(report.rows(), columns=TABLE_COLUMNS)
        for column in ("under", "over"):
            table[column] = table[column].astype("Int64")

        settings = [
            SimulationSetting(
                config=r.config.model_dump(exclude={"n_jobs"}),
                rows=r.rows(),
                selection={method: s.formatted() for method, s in r.selection.items()},
            )
            for r in report.reports
        ]
        paths = [
            _write_frame(out_dir / "table.csv", table),
            _write_json(out_dir / "report.json", SimulationSummary(settings=settings)),
        ]
        span.set_data("rows", len(table))

    logger.info(f"Simulation table written to {out_dir}")
    return paths


@write_report.register
def _(report: SimulationReport, out_dir: Path) -> list[Path]:
    return write_report(SimulationTable([report]), out_dir)


@write_report.register
def _(report: ValidationReport, out_dir: Path) -> list[Path]:
    out_dir = _prepare(out_dir)

    summary = ValidationSummary(
        method=report.method,
        window=report.window,
        r=report.r,
        alpha=report.alpha,
        m=report.m,
        retune=report.retune,
        n_steps=len(report.steps),
        ave_mse=report.ave_mse,
        ave_r2=report.ave_r2,
        var_b=report.var_b,
        adj_error=report.adj_error,
        sigma2_hat=report.sigma2_hat,
        trace_d_inv=report.trace_d_inv,
    )
    steps = pd.DataFrame(
        [step.to_dict() for step in report.steps],
        columns=["step", "mse", "r2", "b_drift"],
    )

    paths = [
        _write_json(out_dir / "report.json", summary),
        _write_frame(out_dir / "steps.csv", steps),
    ]
    logger.info(f"Validation report written to {out_dir}")
    return paths
