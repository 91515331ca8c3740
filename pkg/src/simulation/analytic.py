"""
Closed-form loading MSE of both penalties on a grouped network.

The network links every pair inside each of q groups, group k holding a
share theta_k of the p nodes. Its normalized Laplacian has eigenvalue
n_k / mean_degree with multiplicity n_k - 1 plus q zeros. The formulas below
replace it with theta_k / mean(theta), an approximation; laplacian_spectrum
on the generated network gives the exact values. The true loadings satisfy
tau_j ||b~_j||^2 = z on every penalized coordinate.
"""

import logging
from typing import Sequence, Union

import numpy as np

from ..errors import SimulationError
from ..estimation import PenaltyKind

logger = logging.getLogger(__name__)

SHARE_TOL = 1e-9


def group_sizes(theta: Sequence[float], p: int) -> np.ndarray:
    """
    Node count of each group, apportioned by largest remainders.

    Each group gets floor(p * theta_k) nodes and the nodes left over go to
    the largest fractional parts (lowest index first on ties), so the sizes
    always add up to p.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.size == 0:
        raise SimulationError("at least one group is required")
    if np.any(theta <= 0) or np.any(theta >= 1):
        raise SimulationError(f"group shares must lie in (0, 1), got {theta.tolist()}")
    if abs(theta.sum() - 1.0) > SHARE_TOL:
        raise SimulationError(f"group shares must sum to 1, got {theta.sum():.12g}")

    quotas = p * theta
    sizes = np.floor(quotas + SHARE_TOL).astype(np.int64)
    leftover = max(p - int(sizes.sum()), 0)
    order = np.argsort(-(quotas - sizes), kind="stable")
    sizes[order[:leftover]] += 1

    if np.any(sizes < 1):
        raise SimulationError(f"group sizes {sizes.tolist()} leave a group empty at p={p}")
    return sizes


def grouped_spectrum(theta: Sequence[float], p: int) -> np.ndarray:
    """Approximate nonzero Laplacian eigenvalues theta_k / mean(theta) of the grouped network."""
    theta = np.asarray(theta, dtype=np.float64)
    sizes = group_sizes(theta, p)
    return np.repeat(theta / theta.mean(), sizes - 1)


def grouped_network_mse(
    kind: Union[PenaltyKind, str],
    theta: Sequence[float],
    z: float,
    p: int,
    T: int,
    exact: bool = False,
) -> float:
    """
    Approximate loading MSE of a penalty at its own optimal tuning.

    With w_j = 1/tau_j on the penalized block (0 on the q zeros),
    w_bar = p^{-1} sum_j w_j and c = 1/(T z):

        laplacian:  (pT)^{-1} sum_j w_j / (w_j + c) + q/(pT)
        projection: T^{-1} w_bar / (w_bar + c) + alpha^2 q / ((1 + alpha)^2 pT),
                    alpha = 1 / (T z w_bar)

    exact=True evaluates the projection risk at its exact minimizer,
    ((p - q)/(pT)) w_plus / (w_plus + c) + q/(pT) with w_plus the mean of w
    over the penalized block, so equal groups give identical values for
    both penalties. The laplacian value is already exact.

    Args:
        kind: laplacian or projection
        theta: Group shares in (0, 1)
        z: Common value of tau_j ||b~_j||^2
        p: Number of series
        T: Number of periods
        exact: Keep the O(q/(pT)) terms of the projection risk

    Returns:
        Approximate MSE of the loadings
    """
    kind = PenaltyKind(kind)
    if z <= 0:
        raise SimulationError(f"z must be positive, got {z}")

    tau = grouped_spectrum(theta, p)
    q = len(theta)
    w = 1.0 / tau
    c = 1.0 / (T * z)

    if kind == PenaltyKind.LAPLACIAN:
        return float(np.sum(w / (w + c)) / (p * T) + q / (p * T))

    if kind == PenaltyKind.PROJECTION:
        if exact:
            w_plus = float(w.mean())
            return float((p - q) / (p * T) * w_plus / (w_plus + c) + q / (p * T))
        w_bar = float(w.sum() / p)
        alpha = 1.0 / (T * z * w_bar)
        return float(w_bar / (w_bar + c) / T + alpha ** 2 * q / ((1 + alpha) ** 2 * p * T))

    raise SimulationError("grouped MSE is defined for laplacian and projection penalties only")
