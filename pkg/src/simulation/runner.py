"""
Monte Carlo runner: replications, aggregation and report rows.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from threadpoolctl import threadpool_limits

from ..estimation import PenaltyKind, common_components, fit, identity_operator
from ..graph import laplacian_spectrum
from ..sentry import traced
from ..telemetry import process_stats
from ..tuning import estimate_noise_variance, select_r_er, select_r_one_step, tune
from .config import SimulationConfig
from .dgp import gen_errors, gen_factors, gen_loadings, gen_network
from .metrics import MseSummary, SelectionSummary, mse_common

logger = logging.getLogger(__name__)

MSE_METHODS = ("pca", "lap", "proj")
SELECT_METHODS = ("er", "one_step_lap", "one_step_proj")
# Table row for each estimator next to the selector of the same family
ROW_PAIRS = dict(zip(MSE_METHODS, SELECT_METHODS))

TABLE_COLUMNS = ["case", "p", "T", "method", "mean_mse", "sd_mse", "mean_r", "under", "over"]


@dataclass
class ReplicationResult:
    index: int
    mse: dict[str, float] = field(default_factory=dict)
    r_hat: dict[str, int] = field(default_factory=dict)


@dataclass
class SimulationReport:
    """Aggregated results of one (case, p, T) setting."""

    config: SimulationConfig
    mse: dict[str, MseSummary]
    selection: dict[str, SelectionSummary]
    mse_values: dict[str, list[float]]
    r_values: dict[str, list[int]]
    # Logged, kept out of report.json
    wall_clock_seconds: float = 0.0

    def rows(self) -> list[dict]:
        """One table row per estimator, in pca, lap, proj order."""
        rows = []
        for method in MSE_METHODS:
            mse = self.mse.get(method)
            selection = self.selection.get(ROW_PAIRS[method])
            rows.append({
                "case": self.config.case,
                "p": self.config.p,
                "T": self.config.T,
                "method": method,
                "mean_mse": mse.mean if mse else None,
                "sd_mse": mse.sd if mse else None,
                "mean_r": selection.mean_r if selection else None,
                "under": selection.under if selection else None,
                "over": selection.over if selection else None,
            })
        return rows


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for replication `index` of master `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def run_replication(config: SimulationConfig, index: int) -> ReplicationResult:
    """
    Run one replication of a setting.

    Draw order is fixed: network, loadings, factors, MSE-study errors,
    selection-study errors. BLAS is pinned to one thread so results do not
    depend on how replications are scheduled.
    """
    with threadpool_limits(limits=1):
        rng = replication_rng(config.seed, index)
        result = ReplicationResult(index=index)

        net = gen_network(config.case, config.p, rng)
        spec = laplacian_spectrum(net)
        B = gen_loadings(config.case, spec, config.p, config.r, rng)
        F = gen_factors(config.T, config.r, rng)
        C = F @ B.T
        grids = config.tuning_grids()

        if config.runs_mse:
            X = C + gen_errors(config.T, config.p, config.sigma_e2, rng)
            x_rotated = X @ spec.eigvecs
            sigma2 = estimate_noise_variance(X, spec, config.r, x_rotated=x_rotated)

            pca = fit(X, spec, identity_operator(spec), config.r, x_rotated=x_rotated)
            lap = tune(X, spec, PenaltyKind.LAPLACIAN, config.r, grids, sigma2, x_rotated)
            proj = tune(X, spec, PenaltyKind.PROJECTION, config.r, grids, sigma2, x_rotated)

            result.mse["pca"] = mse_common(common_components(pca), C)
            result.mse["lap"] = mse_common(common_components(lap.estimate), C)
            result.mse["proj"] = mse_common(common_components(proj.estimate), C)

        if config.runs_select:
            X = C + gen_errors(config.T, config.p, config.select_sigma_e2, rng)
            result.r_hat["er"] = select_r_er(X, spec, k_max=config.k_max).r_hat
            for kind, method in (
                (PenaltyKind.LAPLACIAN, "one_step_lap"),
                (PenaltyKind.PROJECTION, "one_step_proj"),
            ):
                result.r_hat[method] = select_r_one_step(
                    X, spec, kind, k_max=config.k_max, grids=grids
                ).r_hat

    return result


def aggregate(config: SimulationConfig, results: list[ReplicationResult]) -> SimulationReport:
    """Order-independent reduction of replication results."""
    results = sorted(results, key=lambda res: res.index)

    mse_values = {
        method: [res.mse[method] for res in results]
        for method in MSE_METHODS if config.runs_mse
    }
    r_values = {
        method: [res.r_hat[method] for res in results]
        for method in SELECT_METHODS if config.runs_select
    }

    return SimulationReport(
        config=config,
        mse={method: MseSummary.from_values(values) for method, values in mse_values.items()},
        selection={
            method: SelectionSummary.from_values(values, config.r)
            for method, values in r_values.items()
        },
        mse_values=mse_values,
        r_values=r_values,
    )


@traced(op="simulate", name="run_case")
def run_case(config: SimulationConfig, n_jobs: Optional[int] = None) -> SimulationReport:
    """
    Run every replication of a setting and aggregate them.

    Args:
        config: Simulation setting
        n_jobs: Worker processes (defaults to config.n_jobs)

    Returns:
        SimulationReport; apart from wall_clock_seconds, identical for
        identical (config, seed) whatever n_jobs is
    """
    n_jobs = n_jobs or config.n_jobs

    logger.info("=" * 50)
    logger.info(
        f"Simulation case {config.case}: p={config.p}, T={config.T}, r={config.r}, "
        f"reps={config.reps}, study={config.study}, jobs={n_jobs}"
    )
    logger.info("=" * 50)

    started = time.perf_counter()
    results = Parallel(n_jobs=n_jobs)(
        delayed(run_replication)(config, index) for index in range(config.reps)
    )
    report = aggregate(config, results)
    report.wall_clock_seconds = time.perf_counter() - started

    for method, summary in report.mse.items():
        logger.info(f"  {method:>5}: mean MSE {summary.mean:.4f} (sd {summary.sd:.4f})")
    for method, summary in report.selection.items():
        logger.info(f"  {method:>13}: r {summary.formatted()}")
    logger.info(f"Case {config.case} done in {report.wall_clock_seconds:.1f}s")
    logger.debug(f"Process stats: {process_stats()}")

    return report
