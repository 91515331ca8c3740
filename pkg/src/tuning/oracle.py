"""
Diagnostics that need the true loadings: oracle alpha, loading risk and
the strength of the shrunk loadings.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import linalg

from ..errors import TuningError
from ..estimation import PenaltyKind, ShrinkageOperator
from ..graph import LaplacianSpectrum

logger = logging.getLogger(__name__)

ZERO_SHARE = 1e-12


@dataclass(frozen=True)
class OracleAlpha:
    """Oracle tuning parameter; unbounded when no shrinkage bias exists."""

    value: float
    unbounded: bool = False

    def capped(self, ceiling: float) -> float:
        return min(self.value, float(ceiling))


def _row_norms(B: np.ndarray, spec: LaplacianSpectrum) -> np.ndarray:
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 1:
        B = B[:, None]
    return np.sum(spec.rotate(B) ** 2, axis=1)


def oracle_alpha(
    kind: Union[PenaltyKind, str],
    B: np.ndarray,
    spec: LaplacianSpectrum,
    T: int,
    m: int = 0,
) -> OracleAlpha:
    """
    Closed-form alpha from the true loadings.

    projection: p / (T ||U1^T B||_F^2), U1 the leading p - m eigenvectors.
    laplacian: 1 / (T max_j tau_j ||b~_j||^2).
    """
    kind = PenaltyKind(kind)
    p = spec.p
    norms = _row_norms(B, spec)

    if kind == PenaltyKind.PROJECTION:
        if not 0 <= m <= p:
            raise TuningError(f"m must lie in [0, {p}], got {m}")
        numerator = float(p)
        denominator = T * float(np.sum(norms[: p - m]))
    elif kind == PenaltyKind.LAPLACIAN:
        numerator = 1.0
        denominator = T * float(np.max(spec.eigvals * norms))
    else:
        raise TuningError("oracle alpha is defined for laplacian and projection penalties only")

    # Zero up to round-off relative to the total loading energy
    if denominator <= ZERO_SHARE * T * float(np.sum(norms)):
        logger.warning(f"Oracle alpha for {kind.value} is unbounded (no shrinkage bias)")
        return OracleAlpha(value=float("inf"), unbounded=True)

    return OracleAlpha(value=numerator / denominator)


def loading_risk(
    B: np.ndarray,
    spec: LaplacianSpectrum,
    op: ShrinkageOperator,
    T: int,
) -> float:
    """
    Rate function p^{-1} ||(D^{-1} - I) B||_F^2 + tr(D^{-2}) / (pT).

    Also the approximate loading MSE under i.i.d. errors.
    """
    p = spec.p
    norms = _row_norms(B, spec)
    w = op.weights
    return float(np.dot((1.0 - w) ** 2, norms) / p + op.trace_inv_sq / (p * T))


def risk_derivative(B: np.ndarray, spec: LaplacianSpectrum, alpha: float, T: int) -> float:
    """Derivative in alpha of loading_risk for the laplacian penalty."""
    p = spec.p
    norms = _row_norms(B, spec)
    tau = spec.eigvals
    scale = 1.0 + alpha * tau
    return float(np.sum(2.0 * tau * (alpha * tau * norms - 1.0 / T) / scale ** 3) / p)


def shrunk_loading_eigs(
    B: np.ndarray,
    spec: LaplacianSpectrum,
    op: ShrinkageOperator,
) -> np.ndarray:
    """Eigenvalues of p^{-1} B^T D^{-1} B, sorted descending."""
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 1:
        B = B[:, None]
    rotated = spec.rotate(B)
    S = rotated.T @ (op.weights[:, None] * rotated) / spec.p
    return linalg.eigvalsh(0.5 * (S + S.T))[::-1]


def factors_remain_strong(eigs: np.ndarray, floor: float) -> bool:
    """True when the smallest shrunk loading eigenvalue stays at or above floor."""
    eigs = np.asarray(eigs)
    return bool(eigs.size > 0 and eigs.min() >= floor)
