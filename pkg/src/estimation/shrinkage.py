"""
Shrinkage operators D^{-1}, diagonal in the Laplacian eigenbasis.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from ..errors import EstimationError
from ..graph import LaplacianSpectrum

logger = logging.getLogger(__name__)


class PenaltyKind(str, Enum):
    """Penalty attached to the loadings."""

    NONE = "none"
    LAPLACIAN = "laplacian"
    PROJECTION = "projection"


# CLI method names
METHOD_KINDS = {
    "pca": PenaltyKind.NONE,
    "lap": PenaltyKind.LAPLACIAN,
    "proj": PenaltyKind.PROJECTION,
}


def kind_for_method(method: str) -> PenaltyKind:
    """Map a method name (pca, lap, proj) to its penalty kind."""
    try:
        return METHOD_KINDS[method]
    except KeyError:
        raise EstimationError(f"unknown method: {method}") from None


@dataclass(frozen=True)
class ShrinkageOperator:
    """
    Diagonal of D^{-1} in the eigenbasis of the normalized Laplacian.

    penalty holds the per-coordinate penalty alpha_j and weights the
    resulting w_j = 1 / (1 + alpha_j).
    """

    kind: PenaltyKind
    alpha: float
    m: int
    penalty: np.ndarray
    weights: np.ndarray

    @property
    def p(self) -> int:
        return int(self.weights.shape[0])

    @property
    def trace_inv(self) -> float:
        """tr(D^{-1})."""
        return float(self.weights.sum())

    @property
    def trace_inv_sq(self) -> float:
        """tr(D^{-2})."""
        return float(np.sum(self.weights ** 2))

    def raw_alpha(self, mean_degree: float) -> float:
        """
        Tuning parameter on the scale of the pairwise-difference penalty.

        (alpha/p) sum_j tau_j ||b~_j||^2 equals raw_alpha * penalty_quadratic(B).
        """
        if mean_degree <= 0:
            return 0.0
        return self.alpha / (2.0 * self.p * mean_degree)


def shrink_weights(
    spec: LaplacianSpectrum,
    kind: Union[PenaltyKind, str],
    alpha: float = 0.0,
    m: int = 0,
) -> ShrinkageOperator:
    """
    Build the shrinkage operator for a penalty.

    Args:
        spec: Laplacian spectrum of the prior network
        kind: none, laplacian or projection
        alpha: Penalty strength (>= 0)
        m: Number of trailing eigen-directions left unpenalized (projection only)

    Returns:
        ShrinkageOperator with w_j = 1/(1 + alpha*tau_j) (laplacian),
        1/(1 + alpha) on the leading p - m coordinates (projection) or 1 (none)

    Raises:
        EstimationError: On negative alpha or m outside [0, p]
    """
    kind = PenaltyKind(kind)
    p = spec.p
    alpha = float(alpha)

    if not np.isfinite(alpha) or alpha < 0:
        raise EstimationError(f"alpha must be a finite value >= 0, got {alpha}")

    if kind == PenaltyKind.PROJECTION:
        m = int(m)
        if not 0 <= m <= p:
            raise EstimationError(f"m must lie in [0, {p}], got {m}")
    else:
        m = 0

    penalty = np.zeros(p)
    if spec.empty_network:
        if kind != PenaltyKind.NONE and alpha > 0:
            logger.debug(f"{kind.value} penalty on an empty network is a no-op")
    elif kind == PenaltyKind.LAPLACIAN:
        penalty = alpha * spec.eigvals
    elif kind == PenaltyKind.PROJECTION:
        penalty[: p - m] = alpha

    weights = 1.0 / (1.0 + penalty)
    penalty.setflags(write=False)
    weights.setflags(write=False)

    return ShrinkageOperator(
        kind=kind,
        alpha=alpha,
        m=m,
        penalty=penalty,
        weights=weights,
    )


def identity_operator(spec: LaplacianSpectrum) -> ShrinkageOperator:
    """Operator with D = I (plain PCA)."""
    return shrink_weights(spec, PenaltyKind.NONE)
