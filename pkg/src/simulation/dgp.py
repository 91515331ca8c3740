"""
Data-generating processes for the four simulation cases.
"""

import logging
import math

import numpy as np

from ..errors import SimulationError
from ..graph import LaplacianSpectrum, Network, build_network
from .config import N_GROUPS, TRAILING_BLOCK

logger = logging.getLogger(__name__)

AR_COEF = 0.2
BAND_VALUE = 0.2
BAND_WIDTH = 2
# Laplacian eigenvalues below this form the unpenalized block in cases 3 and 4
SPLIT_THRESHOLD = 0.001
INACTIVE_LINK_PROB = 0.1


def _symmetric_bernoulli(n: int, prob: float, rng: np.random.Generator) -> np.ndarray:
    """Symmetric 0/1 matrix with Bernoulli(prob) entries below the diagonal."""
    lower = np.tril(rng.random((n, n)) < prob, k=-1)
    return (lower | lower.T).astype(np.int8)


def gen_network(case: int, p: int, rng: np.random.Generator) -> Network:
    """
    Generate the prior network of a simulation case.

    case 1, 2: Erdos-Renyi with link probability 0.5.
    case 3: nodes split into 50 equally likely groups, linked within groups.
    case 4: last 50 nodes isolated; the others are active or inactive with
        probability 1/2; active pairs always linked, inactive pairs linked
        with probability 0.1, mixed pairs never.
    """
    if case in (1, 2):
        if case == 2 and p <= TRAILING_BLOCK:
            raise SimulationError(f"case 2 requires p > {TRAILING_BLOCK}, got {p}")
        adjacency = _symmetric_bernoulli(p, 0.5, rng)

    elif case == 3:
        if p < N_GROUPS:
            raise SimulationError(f"case 3 requires p >= {N_GROUPS}, got {p}")
        groups = rng.integers(0, N_GROUPS, size=p)
        adjacency = (groups[:, None] == groups[None, :]).astype(np.int8)
        np.fill_diagonal(adjacency, 0)

    elif case == 4:
        if p <= TRAILING_BLOCK:
            raise SimulationError(f"case 4 requires p > {TRAILING_BLOCK}, got {p}")
        n_linked = p - TRAILING_BLOCK
        active = rng.random(n_linked) < 0.5
        inactive_links = _symmetric_bernoulli(n_linked, INACTIVE_LINK_PROB, rng)

        block = np.where(
            active[:, None] & active[None, :],
            1,
            np.where(~active[:, None] & ~active[None, :], inactive_links, 0),
        ).astype(np.int8)
        np.fill_diagonal(block, 0)

        adjacency = np.zeros((p, p), dtype=np.int8)
        adjacency[:n_linked, :n_linked] = block

    else:
        raise SimulationError(f"unknown simulation case: {case}")

    return build_network(adjacency, p, fmt="dense")


def orthonormal_columns(n: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """Random n x r matrix with orthonormal columns (QR of a Gaussian draw)."""
    if r > n:
        raise SimulationError(f"cannot draw {r} orthonormal columns in dimension {n}")
    q, upper = np.linalg.qr(rng.standard_normal((n, r)))
    signs = np.sign(np.diag(upper))
    signs[signs == 0] = 1.0
    return q * signs


def gen_loadings(
    case: int,
    spec: LaplacianSpectrum,
    p: int,
    r: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Generate the p x r loading matrix of a simulation case.

    case 1: i.i.d. standard normal.
    case 2: B = 0.25 sqrt(p) Z1 G1 + sqrt(p) Z2 G2 with Z2 the trailing 50
        eigenvectors and G1, G2 column-orthonormal.
    case 3, 4: Z2 spans the d eigenvectors with tau < 0.001; G1 has entries
        tau_j^{-1/2}, s = p r / ||G1||_F^2 and B = 0.25 sqrt(s) Z1 G1 + sqrt(p) Z2 G2,
        so tau_j ||b~_j||^2 is the same for every penalized coordinate.
    """
    if spec.p != p:
        raise SimulationError(f"spectrum has {spec.p} nodes, expected {p}")

    if case == 1:
        return rng.standard_normal((p, r))

    U = spec.eigvecs

    if case == 2:
        split = p - TRAILING_BLOCK
        if split < r:
            raise SimulationError(f"case 2 needs p - {TRAILING_BLOCK} >= r, got p={p}, r={r}")
        gamma1 = orthonormal_columns(split, r, rng)
        gamma2 = orthonormal_columns(TRAILING_BLOCK, r, rng)
        return 0.25 * math.sqrt(p) * U[:, :split] @ gamma1 + math.sqrt(p) * U[:, split:] @ gamma2

    if case in (3, 4):
        d = int(np.sum(spec.eigvals < SPLIT_THRESHOLD))
        split = p - d
        if d == 0 or split == 0:
            raise SimulationError(f"degenerate eigen split for case {case}: d={d}, p={p}")
        if d < r:
            raise SimulationError(f"case {case} needs at least r={r} near-zero eigenvalues, got {d}")

        tau = spec.eigvals[:split]
        gamma1 = np.repeat(tau[:, None] ** -0.5, r, axis=1)
        s = p * r / float(np.sum(gamma1 ** 2))
        gamma2 = orthonormal_columns(d, r, rng)
        return 0.25 * math.sqrt(s) * U[:, :split] @ gamma1 + math.sqrt(p) * U[:, split:] @ gamma2

    raise SimulationError(f"unknown simulation case: {case}")


def gen_factors(T: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """AR(1) factors with coefficient 0.2, started from the stationary law."""
    if T < 1:
        raise SimulationError(f"T must be >= 1, got {T}")

    scores = np.empty((T, r))
    scores[0] = rng.normal(0.0, math.sqrt(1.0 / (1.0 - AR_COEF ** 2)), size=r)
    innovations = rng.standard_normal((T - 1, r))
    for t in range(1, T):
        scores[t] = AR_COEF * scores[t - 1] + innovations[t - 1]
    return scores


def banded_mixing(n: int) -> np.ndarray:
    """Identity plus 0.2 on the first two off-diagonals on each side."""
    matrix = np.eye(n)
    for offset in range(1, BAND_WIDTH + 1):
        band = np.full(n - offset, BAND_VALUE)
        matrix += np.diag(band, k=offset) + np.diag(band, k=-offset)
    return matrix


def gen_errors(T: int, p: int, sigma_e2: float, rng: np.random.Generator) -> np.ndarray:
    """Idiosyncratic errors P1 eps P2 with eps i.i.d. N(0, sigma_e2)."""
    if T < 3 or p < 3:
        raise SimulationError(f"T and p must be >= 3, got T={T}, p={p}")
    if sigma_e2 < 0:
        raise SimulationError(f"sigma_e2 must be >= 0, got {sigma_e2}")

    eps = rng.normal(0.0, math.sqrt(sigma_e2), size=(T, p))
    return banded_mixing(T) @ eps @ banded_mixing(p)
