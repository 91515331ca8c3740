"""
C_L criterion and grid-search tuning of the penalty parameters.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..errors import TuningError
from ..estimation import (
    FactorEstimate,
    PenaltyKind,
    ShrinkageOperator,
    as_panel,
    common_components,
    fit,
    identity_operator,
    shrink_weights,
)
from ..graph import LaplacianSpectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TuningGrids:
    """Candidate alpha values and, for the projection penalty, m values."""

    alphas: tuple[float, ...]
    ms: tuple[int, ...] = ()


@dataclass(frozen=True)
class ScoreEntry:
    alpha: float
    m: Optional[int]
    score: float

    @property
    def key(self) -> tuple:
        """Ordering used for selection: score, then alpha, then m."""
        return (self.score, self.alpha, self.m or 0)


@dataclass(frozen=True)
class TuningResult:
    """Outcome of a C_L grid search."""

    kind: PenaltyKind
    alpha_star: float
    m_star: Optional[int]
    score_table: list[ScoreEntry]
    sigma2_hat: float
    r: int
    operator: ShrinkageOperator
    estimate: FactorEstimate = field(repr=False)

    @property
    def best_score(self) -> float:
        return min(entry.score for entry in self.score_table)


def estimate_noise_variance(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    r: int,
    x_rotated: Optional[np.ndarray] = None,
) -> float:
    """
    Plug-in noise variance (pT)^{-1} ||X - F0 B0^T||_F^2 from the plain PCA fit.
    """
    X = as_panel(X)
    T, p = X.shape
    est = fit(X, spec, identity_operator(spec), r, x_rotated=x_rotated)
    residual = X - common_components(est)
    return float(np.sum(residual ** 2) / (p * T))


def cl_score(
    X: np.ndarray,
    est: FactorEstimate,
    op: ShrinkageOperator,
    sigma2: float,
    r: int,
) -> float:
    """
    C_L score (pT)^{-1} ||X - C^||_F^2 + 2 r sigma2 tr(D^{-1}) / (pT).

    Args:
        X: T x p panel the estimate was fitted on
        est: Fitted estimate
        op: Operator the estimate was fitted with
        sigma2: Noise variance (usually estimate_noise_variance)
        r: Number of factors

    Returns:
        The score; lower is better
    """
    if sigma2 < 0:
        raise TuningError(f"sigma2 must be >= 0, got {sigma2}")
    X = as_panel(X)
    T, p = X.shape
    rss = float(np.sum((X - common_components(est)) ** 2))
    return rss / (p * T) + 2.0 * r * sigma2 * op.trace_inv / (p * T)


def adjusted_error(
    X: np.ndarray,
    est: FactorEstimate,
    op: ShrinkageOperator,
    sigma2: float,
    r: int,
) -> float:
    """C_L score minus sigma2, an estimate of the common-component error."""
    return cl_score(X, est, op, sigma2, r) - sigma2


def default_grids(p: int) -> TuningGrids:
    """
    Default search grids for a panel with p series.

    alphas: {1/b - 1 : b = 0.05, 0.10, ..., 1} together with p.
    ms: round(p^q) for q = 0.1, ..., 0.9, deduplicated.
    """
    if p < 2:
        raise TuningError(f"p must be >= 2 for the default grids, got {p}")

    # b = k/20 gives 1/b - 1 = (20 - k)/k
    alphas = {(20 - k) / k for k in range(1, 21)}
    alphas.add(float(p))

    ms = {int(np.floor(p ** (q / 10) + 0.5)) for q in range(1, 10)}

    return TuningGrids(alphas=tuple(sorted(alphas)), ms=tuple(sorted(ms)))


def tune(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    kind: Union[PenaltyKind, str],
    r: int,
    grids: Optional[TuningGrids] = None,
    sigma2: Optional[float] = None,
    x_rotated: Optional[np.ndarray] = None,
) -> TuningResult:
    """
    Select (alpha, m) by minimizing the C_L score over a grid.

    A single sigma2 (the plain PCA plug-in at the caller's r unless given)
    is used for every grid point, and X U is computed once.

    Args:
        X: T x p panel
        spec: Laplacian spectrum
        kind: laplacian or projection
        r: Number of factors
        grids: Search grids (default_grids(p) when omitted)
        sigma2: Noise variance override
        x_rotated: Precomputed X U

    Returns:
        TuningResult; ties go to the smaller alpha, then the smaller m

    Raises:
        TuningError: For an empty grid or a non-penalized kind
    """
    kind = PenaltyKind(kind)
    if kind == PenaltyKind.NONE:
        raise TuningError("tuning requires a laplacian or projection penalty")

    X = as_panel(X)
    T, p = X.shape
    grids = grids or default_grids(p)

    if kind == PenaltyKind.LAPLACIAN:
        points = [(float(alpha), None) for alpha in grids.alphas]
    else:
        points = [(float(alpha), int(m)) for alpha in grids.alphas for m in grids.ms]
    if not points:
        raise TuningError(f"empty tuning grid for {kind.value}")

    if x_rotated is None:
        x_rotated = X @ spec.eigvecs
    if sigma2 is None:
        sigma2 = estimate_noise_variance(X, spec, r, x_rotated=x_rotated)

    table: list[ScoreEntry] = []
    best: Optional[tuple[ScoreEntry, ShrinkageOperator, FactorEstimate]] = None

    for alpha, m in points:
        op = shrink_weights(spec, kind, alpha, m or 0)
        est = fit(X, spec, op, r, x_rotated=x_rotated)
        entry = ScoreEntry(alpha=alpha, m=m, score=cl_score(X, est, op, sigma2, r))
        table.append(entry)
        if best is None or entry.key < best[0].key:
            best = (entry, op, est)

    winner, op, est = best
    logger.debug(
        f"Tuned {kind.value} at r={r}: alpha={winner.alpha:g}, m={winner.m}, "
        f"score={winner.score:.6g}, sigma2={sigma2:.6g} ({len(table)} points)"
    )

    return TuningResult(
        kind=kind,
        alpha_star=winner.alpha,
        m_star=winner.m,
        score_table=table,
        sigma2_hat=float(sigma2),
        r=r,
        operator=op,
        estimate=est,
    )
