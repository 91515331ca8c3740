"""Shared fixtures and the --runslow switch for Monte Carlo acceptance runs."""

import numpy as np
import pytest

from src.graph import build_network, laplacian_spectrum


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow Monte Carlo tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def random_network(p: int, prob: float, rng: np.random.Generator):
    """Erdos-Renyi network used across unit tests."""
    lower = np.tril(rng.random((p, p)) < prob, k=-1)
    return build_network((lower | lower.T).astype(int), p, fmt="dense")


def random_instance(T: int, p: int, r: int, seed: int, prob: float = 0.3):
    """Low-rank plus noise panel with a random network and its spectrum."""
    rng = np.random.default_rng(seed)
    net = random_network(p, prob, rng)
    spec = laplacian_spectrum(net)
    F = rng.standard_normal((T, r))
    B = rng.standard_normal((p, r))
    X = F @ B.T + rng.standard_normal((T, p))
    return X, net, spec


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
