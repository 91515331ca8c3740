"""
Prior network model and construction.
"""

import logging
from dataclasses import dataclass
from typing import Literal, Sequence, Union

import numpy as np
from scipy.sparse import csgraph

from ..errors import NetworkError

logger = logging.getLogger(__name__)

AdjacencyFormat = Literal["edges", "dense"]


@dataclass(frozen=True)
class Network:
    """Undirected, unweighted network over p nodes."""

    p: int
    adjacency: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        """Number of neighbours of every node."""
        return self.adjacency.sum(axis=1).astype(np.float64)

    @property
    def mean_degree(self) -> float:
        return float(self.degrees.mean())

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    @property
    def is_empty(self) -> bool:
        return self.n_edges == 0

    def n_components(self) -> int:
        """Connected components, isolated nodes included."""
        n, _ = csgraph.connected_components(self.adjacency, directed=False)
        return int(n)


def _from_edges(spec, p: int) -> np.ndarray:
    pairs = np.asarray(spec)
    if pairs.size == 0:
        return np.zeros((p, p), dtype=np.int8)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise NetworkError(f"edge list must have two columns, got shape {pairs.shape}")

    if not np.all(np.equal(np.mod(pairs, 1), 0)):
        raise NetworkError("edge list contains non-integer node indices")
    pairs = pairs.astype(np.int64)

    for k, (i, j) in enumerate(pairs):
        if not (0 <= i < p and 0 <= j < p):
            raise NetworkError(f"edge {k} ({i}, {j}) references a node outside [0, {p})")
        if i == j:
            raise NetworkError(f"self-loop at node {i} (edge {k})")

    adjacency = np.zeros((p, p), dtype=np.int8)
    adjacency[pairs[:, 0], pairs[:, 1]] = 1
    adjacency[pairs[:, 1], pairs[:, 0]] = 1
    return adjacency


def _from_dense(spec, p: int) -> np.ndarray:
    matrix = np.asarray(spec, dtype=np.float64)
    if matrix.shape != (p, p):
        raise NetworkError(f"dense adjacency must be {p}x{p}, got shape {matrix.shape}")
    if not np.all((matrix == 0) | (matrix == 1)):
        raise NetworkError("dense adjacency entries must be 0 or 1")
    if not np.array_equal(matrix, matrix.T):
        i, j = np.argwhere(matrix != matrix.T)[0]
        raise NetworkError(f"asymmetric adjacency at ({i}, {j})")
    if np.any(np.diag(matrix) != 0):
        i = int(np.flatnonzero(np.diag(matrix))[0])
        raise NetworkError(f"self-loop at node {i}")
    return matrix.astype(np.int8)


def build_network(
    spec: Union[Sequence[Sequence[int]], np.ndarray],
    p: int,
    fmt: AdjacencyFormat = "edges",
) -> Network:
    """
    Build a validated Network from an edge list or a dense 0/1 matrix.

    Args:
        spec: Node pairs (fmt="edges") or a p x p matrix (fmt="dense")
        p: Number of nodes
        fmt: Input representation

    Returns:
        Network with a symmetric adjacency and zero diagonal

    Raises:
        NetworkError: On self-loops, asymmetry, non-0/1 entries or
            out-of-range node indices
    """
    if p < 1:
        raise NetworkError(f"node count must be positive, got {p}")

    if fmt == "edges":
        adjacency = _from_edges(spec, p)
    elif fmt == "dense":
        adjacency = _from_dense(spec, p)
    else:
        raise NetworkError(f"unknown adjacency format: {fmt}")

    adjacency.setflags(write=False)
    network = Network(p=p, adjacency=adjacency)
    logger.debug(f"Network built: p={p}, edges={network.n_edges}")
    return network
