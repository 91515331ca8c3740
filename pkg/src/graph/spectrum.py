"""
Normalized Laplacian spectrum shared by every estimator.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ..errors import NetworkError
from .network import Network

logger = logging.getLogger(__name__)

# Eigenvalues below this are treated as exact zeros
ZERO_TOL = 1e-8


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """
    Flip columns so each one's largest-magnitude entry is positive.

    Ties go to the lowest row index.
    """
    vectors = np.array(vectors, dtype=np.float64, copy=True)
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Eigen-decomposition of the normalized Laplacian (D - A) / mean degree."""

    p: int
    eigvecs: np.ndarray
    eigvals: np.ndarray
    mean_degree: float
    empty_network: bool = False

    def rotate(self, matrix: np.ndarray) -> np.ndarray:
        """Coordinates of the rows of a p x k matrix in the eigenbasis (U^T M)."""
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.shape[0] != self.p:
            raise NetworkError(f"expected {self.p} rows, got {matrix.shape[0]}")
        return self.eigvecs.T @ matrix

    def n_zero(self, tol: float = ZERO_TOL) -> int:
        """Count of eigenvalues below tol."""
        return int(np.sum(self.eigvals < tol))

    def normalized_laplacian(self) -> np.ndarray:
        """Rebuild U diag(tau) U^T."""
        return (self.eigvecs * self.eigvals) @ self.eigvecs.T


def laplacian_spectrum(net: Network) -> LaplacianSpectrum:
    """
    Compute the spectrum of the normalized Laplacian of a network.

    Eigenvalues are sorted nonincreasing and each eigenvector is sign-fixed.
    An empty network yields tau = 0 and U = I with the empty_network flag set,
    which turns every penalty into a no-op.
    """
    p = net.p
    mean_degree = net.mean_degree

    if mean_degree == 0:
        logger.warning(f"Empty network (p={p}): penalties disabled, falling back to PCA")
        eigvecs = np.eye(p)
        eigvals = np.zeros(p)
        eigvecs.setflags(write=False)
        eigvals.setflags(write=False)
        return LaplacianSpectrum(
            p=p,
            eigvecs=eigvecs,
            eigvals=eigvals,
            mean_degree=0.0,
            empty_network=True,
        )

    adjacency = net.adjacency.astype(np.float64)
    laplacian = (np.diag(net.degrees) - adjacency) / mean_degree

    values, vectors = linalg.eigh(laplacian)
    values = np.clip(values[::-1], 0.0, None)
    vectors = fix_signs(vectors[:, ::-1])

    values.setflags(write=False)
    vectors.setflags(write=False)

    logger.debug(
        f"Laplacian spectrum: p={p}, mean_degree={mean_degree:.4f}, "
        f"tau_max={values[0]:.4f}, zeros={int(np.sum(values < ZERO_TOL))}"
    )
    return LaplacianSpectrum(
        p=p,
        eigvecs=vectors,
        eigvals=values,
        mean_degree=mean_degree,
    )


def penalty_quadratic(B: np.ndarray, net: Network, spec: LaplacianSpectrum) -> float:
    """
    Pairwise-difference penalty sum_i sum_j A_ij ||b_i - b_j||^2.

    Evaluated in the eigenbasis as 2 * mean_degree * sum_j tau_j ||b~_j||^2.
    """
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 1:
        B = B[:, None]
    if B.shape[0] != net.p or spec.p != net.p:
        raise NetworkError(f"loadings have {B.shape[0]} rows, network has {net.p} nodes")
    if spec.empty_network:
        return 0.0

    rotated = spec.rotate(B)
    row_norms = np.sum(rotated ** 2, axis=1)
    return float(2.0 * spec.mean_degree * np.dot(spec.eigvals, row_norms))
