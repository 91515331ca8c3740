"""
Panel standardization and rolling recursive validation.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import NetFactorError, PanelError
from ..estimation import (
    PenaltyKind,
    ShrinkageOperator,
    as_panel,
    fit,
    identity_operator,
    kind_for_method,
    shrink_weights,
)
from ..graph import LaplacianSpectrum
from ..sentry import traced
from ..telemetry import process_stats
from ..tuning import TuningGrids, adjusted_error, estimate_noise_variance, tune

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationStep:
    """Out-of-sample fit of one period."""

    step: int
    mse: float
    r2: float
    b_drift: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "mse": self.mse,
            "r2": self.r2,
            "b_drift": self.b_drift,
        }


@dataclass
class ValidationReport:
    """Per-step records and the four summary metrics of a rolling run."""

    method: str
    window: int
    r: int
    alpha: float
    m: Optional[int]
    steps: list[ValidationStep]
    ave_mse: float
    ave_r2: float
    var_b: float
    adj_error: float
    sigma2_hat: float
    trace_d_inv: float
    retune: bool = False


def standardize(X: np.ndarray) -> np.ndarray:
    """
    Demean each column and scale it to unit sample standard deviation (ddof=1).

    Raises:
        PanelError: If a column is constant
    """
    try:
        X = as_panel(X)
    except NetFactorError as e:
        raise PanelError(str(e)) from e
    if X.shape[0] < 2:
        raise PanelError(f"standardization needs at least 2 rows, got {X.shape[0]}")

    sd = X.std(axis=0, ddof=1)
    constant = np.flatnonzero(sd == 0)
    if constant.size:
        raise PanelError(f"column {int(constant[0])} is constant and cannot be standardized")

    return (X - X.mean(axis=0)) / sd


def align_columns(B: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Flip columns of B whose inner product with the reference is negative."""
    signs = np.sign(np.sum(B * reference, axis=0))
    signs[signs == 0] = 1.0
    return B * signs


def _step_fit(B: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    """Regress one cross-section on the loadings; return (mse, r2)."""
    p, r = B.shape
    if np.linalg.matrix_rank(B) < r:
        raise PanelError(f"loadings are rank deficient (B^T B singular); r={r} is too large for the window")

    scores, *_ = np.linalg.lstsq(B, x, rcond=None)
    residual = x - B @ scores
    rss = float(residual @ residual)
    tss = float(np.sum((x - x.mean()) ** 2))

    if tss > 0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss == 0 else 0.0
    return rss / p, r2


def _window_operator(
    window_rows: np.ndarray,
    spec: LaplacianSpectrum,
    kind: PenaltyKind,
    r: int,
    grids: Optional[TuningGrids],
) -> ShrinkageOperator:
    if kind == PenaltyKind.NONE:
        return identity_operator(spec)
    return tune(window_rows, spec, kind, r, grids).operator


@traced(op="validate", name="recursive_validate")
def recursive_validate(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    method: str,
    window: int,
    r: int,
    grids: Optional[TuningGrids] = None,
    alpha: Optional[float] = None,
    m: Optional[int] = None,
    retune: bool = False,
    sigma2: Optional[float] = None,
) -> ValidationReport:
    """
    Rolling out-of-sample validation of an estimator.

    For each period t >= window, loadings are fitted on the preceding
    `window` rows and x_t is regressed on them. (alpha, m) come from the
    arguments when given, otherwise from C_L tuning on the first window
    (or on every window with retune=True).

    Args:
        X: T x p panel (typically standardized)
        spec: Laplacian spectrum of the prior network
        method: pca, lap or proj
        window: Rolling window length
        r: Number of factors
        grids: Tuning grids (default_grids(p) when omitted)
        alpha: Fixed penalty strength
        m: Fixed projection dimension
        retune: Re-tune on every window
        sigma2: Noise variance override for the adjusted error

    Returns:
        ValidationReport with Ave_MSE, Ave_R2, Var_B and the full-sample
        adjusted error
    """
    X = as_panel(X)
    T, p = X.shape
    kind = kind_for_method(method)

    if window < 1 or T <= window:
        raise PanelError(f"window must satisfy 1 <= window < T = {T}, got {window}")
    if r < 1 or r >= min(window, p):
        raise PanelError(f"r must satisfy 1 <= r < min(window, p) = {min(window, p)}, got {r}")

    fixed = kind == PenaltyKind.NONE or alpha is not None
    if kind == PenaltyKind.PROJECTION and alpha is not None and m is None:
        raise PanelError("a fixed alpha for the projection penalty also needs m")

    if kind == PenaltyKind.NONE:
        op = identity_operator(spec)
    elif alpha is not None:
        op = shrink_weights(spec, kind, alpha, m or 0)
    else:
        op = _window_operator(X[:window], spec, kind, r, grids)

    logger.info("=" * 50)
    logger.info(
        f"Recursive validation: method={method}, T={T}, p={p}, window={window}, r={r}, "
        f"alpha={op.alpha:g}, m={op.m}, retune={retune and not fixed}"
    )
    logger.info("=" * 50)

    started = time.perf_counter()
    steps: list[ValidationStep] = []
    previous: Optional[np.ndarray] = None

    for t in range(window, T):
        rows = X[t - window:t]
        step_op = op
        if retune and not fixed and t > window:
            step_op = _window_operator(rows, spec, kind, r, grids)

        loadings = fit(rows, spec, step_op, r).loadings
        mse, r2 = _step_fit(loadings, X[t])

        drift = None
        if previous is not None:
            loadings = align_columns(loadings, previous)
            drift = float(np.sum((loadings - previous) ** 2) / (p * r))
        previous = loadings

        steps.append(ValidationStep(step=t, mse=mse, r2=r2, b_drift=drift))
        logger.debug(f"Step {t}: mse={mse:.6g}, r2={r2:.4f}, drift={drift}")

    drifts = [s.b_drift for s in steps if s.b_drift is not None]

    full = fit(X, spec, op, r)
    sigma2_hat = estimate_noise_variance(X, spec, r) if sigma2 is None else float(sigma2)

    report = ValidationReport(
        method=method,
        window=window,
        r=r,
        alpha=op.alpha,
        m=op.m if kind == PenaltyKind.PROJECTION else None,
        steps=steps,
        ave_mse=float(np.mean([s.mse for s in steps])),
        ave_r2=float(np.mean([s.r2 for s in steps])),
        var_b=float(np.mean(drifts)) if drifts else 0.0,
        adj_error=adjusted_error(X, full, op, sigma2_hat, r),
        sigma2_hat=sigma2_hat,
        trace_d_inv=op.trace_inv,
        retune=retune and not fixed,
    )
    logger.info(
        f"Validation done: Ave_MSE={report.ave_mse:.4f}, Ave_R2={report.ave_r2:.4f}, "
        f"Var_B={report.var_b:.4f}, Adj_error={report.adj_error:.4f} "
        f"({time.perf_counter() - started:.1f}s)"
    )
    logger.debug(f"Process stats: {process_stats()}")
    return report
