"""
Closed-form PCA and penalized PCA estimators of factor models.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import linalg

from ..errors import EstimationError
from ..graph import LaplacianSpectrum, fix_signs
from .shrinkage import ShrinkageOperator

logger = logging.getLogger(__name__)

# Gap between lambda_r and lambda_{r+1} below which the leading subspace is ambiguous
DEGENERATE_GAP = 1e-10


@dataclass(frozen=True)
class FactorEstimate:
    """Estimated factor scores and loadings for one operator."""

    r: int
    scores: np.ndarray
    loadings: np.ndarray
    operator: ShrinkageOperator
    eigvals: np.ndarray
    all_eigvals: np.ndarray
    degenerate_gap: bool = False

    @property
    def T(self) -> int:
        return int(self.scores.shape[0])

    @property
    def p(self) -> int:
        return int(self.loadings.shape[0])

    @property
    def common(self) -> np.ndarray:
        return common_components(self)


def as_panel(X: np.ndarray) -> np.ndarray:
    """Validate a T x p panel and return it as float64."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise EstimationError(f"panel must be two-dimensional, got {X.ndim} dimensions")
    if not np.all(np.isfinite(X)):
        t, j = np.argwhere(~np.isfinite(X))[0]
        raise EstimationError(f"panel has a non-finite value at row {t}, column {j}")
    return X


def check_rank(r: int, T: int, p: int) -> int:
    r = int(r)
    if r < 1 or r >= min(T, p):
        raise EstimationError(f"r must satisfy 1 <= r < min(T, p) = {min(T, p)}, got {r}")
    return r


def gram_eigen(x_rotated: np.ndarray, weights: np.ndarray):
    """
    Eigen-decomposition of X~ diag(w) X~^T, largest first.

    Ties keep the solver's index order.
    """
    gram = (x_rotated * weights) @ x_rotated.T
    gram = 0.5 * (gram + gram.T)
    values, vectors = linalg.eigh(gram)
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def fit(
    X: np.ndarray,
    spec: LaplacianSpectrum,
    op: ShrinkageOperator,
    r: int,
    x_rotated: Optional[np.ndarray] = None,
) -> FactorEstimate:
    """
    Fit r factors with the shrinkage operator op.

    F^ is sqrt(T) times the leading r eigenvectors of X D^{-1} X^T and
    B^ = T^{-1} D^{-1} X^T F^. Both are computed in the eigenbasis U of the
    Laplacian, where D^{-1} is diagonal.

    Args:
        X: T x p panel (used as given, no demeaning)
        spec: Laplacian spectrum of the prior network
        op: Shrinkage operator built on spec
        r: Number of factors, 1 <= r < min(T, p)
        x_rotated: Precomputed X U, reused across a tuning grid

    Returns:
        FactorEstimate with F^T F / T = I_r
    """
    X = as_panel(X)
    T, p = X.shape
    if spec.p != p or op.p != p:
        raise EstimationError(f"panel has {p} columns, spectrum/operator have {spec.p}/{op.p}")
    r = check_rank(r, T, p)

    if x_rotated is None:
        x_rotated = X @ spec.eigvecs

    values, vectors = gram_eigen(x_rotated, op.weights)
    all_eigvals = np.clip(values / (p * T), 0.0, None)

    scores = math.sqrt(T) * fix_signs(vectors[:, :r])
    loadings = spec.eigvecs @ (op.weights[:, None] * (x_rotated.T @ scores)) / T

    degenerate = bool(all_eigvals[r - 1] - all_eigvals[r] < DEGENERATE_GAP)
    if degenerate:
        logger.warning(
            f"Degenerate eigen-gap at r={r} ({op.kind.value}, alpha={op.alpha:g}): "
            f"leading subspace is not unique"
        )

    return FactorEstimate(
        r=r,
        scores=scores,
        loadings=loadings,
        operator=op,
        eigvals=all_eigvals[:r].copy(),
        all_eigvals=all_eigvals,
        degenerate_gap=degenerate,
    )


def common_components(est: FactorEstimate) -> np.ndarray:
    """C^ = F^ B^^T."""
    return est.scores @ est.loadings.T


def penalized_objective(
    X: np.ndarray,
    F: np.ndarray,
    B: np.ndarray,
    spec: LaplacianSpectrum,
    op: ShrinkageOperator,
) -> float:
    """
    Penalized least-squares objective minimized by the closed-form loadings.

    (pT)^{-1} ||X - F B^T||_F^2 + p^{-1} sum_j alpha_j ||b~_j||^2, with
    alpha_j the operator's per-coordinate penalty.

    Raises:
        EstimationError: If F^T F / T is not the identity within 1e-6
    """
    X = as_panel(X)
    T, p = X.shape
    F = np.asarray(F, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)

    if F.shape[0] != T or B.shape[0] != p or F.shape[1] != B.shape[1]:
        raise EstimationError(f"shape mismatch: X {X.shape}, F {F.shape}, B {B.shape}")

    r = F.shape[1]
    if np.max(np.abs(F.T @ F / T - np.eye(r))) > 1e-6:
        raise EstimationError("factor scores are not orthonormal (F^T F / T != I)")

    loss = np.sum((X - F @ B.T) ** 2) / (p * T)
    row_norms = np.sum(spec.rotate(B) ** 2, axis=1)
    return float(loss + np.dot(op.penalty, row_norms) / p)


def explained_variability(est: Union[FactorEstimate, np.ndarray], k: int) -> float:
    """Share of total eigenvalue mass of (pT)^{-1} X D^{-1} X^T in the leading k."""
    eigvals = est.all_eigvals if isinstance(est, FactorEstimate) else np.asarray(est)
    total = float(np.sum(eigvals))
    if total <= 0:
        return 0.0
    return float(np.sum(eigvals[:k]) / total)
