"""Tests for the data-generating processes, metrics, runner and grouped-network MSE."""

import networkx as nx
import numpy as np
import pytest
from pydantic import ValidationError

from src.errors import SimulationError
from src.graph import laplacian_spectrum
from src.simulation import (
    SimulationConfig,
    banded_mixing,
    gen_errors,
    gen_factors,
    gen_loadings,
    gen_network,
    group_sizes,
    grouped_network_mse,
    mse_common,
    replication_rng,
    run_case,
    run_replication,
)
from src.simulation.metrics import SelectionSummary


class TestGenNetwork:

    @pytest.mark.parametrize("seed", range(20))
    def test_case_one_density(self, seed):
        net = gen_network(1, 100, np.random.default_rng(seed))
        A = np.asarray(net.adjacency)
        assert np.array_equal(A, A.T)
        assert np.all(np.diag(A) == 0)
        density = A.sum() / (100 * 99)
        assert 0.45 < density < 0.55

    def test_case_three_components(self):
        net = gen_network(3, 200, np.random.default_rng(1))
        spec = laplacian_spectrum(net)
        graph = nx.from_numpy_array(np.asarray(net.adjacency))
        assert spec.n_zero() == nx.number_connected_components(graph)
        assert spec.n_zero() <= 50

    def test_case_four_structure(self):
        rng = np.random.default_rng(2)
        net = gen_network(4, 150, rng)
        A = np.asarray(net.adjacency)
        assert np.all(A[100:].sum(axis=1) == 0)

        # Active nodes are exactly those linked to every other active node
        linked = A[:100, :100]
        degrees = linked.sum(axis=1)
        clique = np.flatnonzero(degrees == degrees.max())
        block = linked[np.ix_(clique, clique)]
        assert np.all(block + np.eye(len(clique)) == 1)

    @pytest.mark.parametrize("case,p", [(2, 50), (3, 49), (4, 50)])
    def test_small_p_rejected(self, case, p):
        with pytest.raises(SimulationError):
            gen_network(case, p, np.random.default_rng(0))


class TestGenLoadings:

    def test_case_one_moments(self):
        values = np.concatenate([
            gen_loadings(1, laplacian_spectrum(gen_network(1, 300, rng)), 300, 3, rng).ravel()
            for rng in (np.random.default_rng(s) for s in range(3))
        ])
        assert abs(values.mean()) < 0.1
        assert abs(values.var() - 1.0) < 0.1

    def test_case_two_block_norms(self):
        rng = np.random.default_rng(4)
        p, r = 200, 3
        spec = laplacian_spectrum(gen_network(2, p, rng))
        B = gen_loadings(2, spec, p, r, rng)
        rotated = spec.rotate(B)
        assert np.sum(rotated[: p - 50] ** 2) == pytest.approx(0.0625 * p * r, rel=1e-8)
        assert np.sum(rotated[p - 50:] ** 2) == pytest.approx(p * r, rel=1e-8)

    @pytest.mark.parametrize("case", [3, 4])
    def test_constant_penalty_terms(self, case):
        rng = np.random.default_rng(5)
        p, r = 200, 3
        spec = laplacian_spectrum(gen_network(case, p, rng))
        B = gen_loadings(case, spec, p, r, rng)

        d = int(np.sum(spec.eigvals < 0.001))
        tau = spec.eigvals[: p - d]
        terms = tau * np.sum(spec.rotate(B)[: p - d] ** 2, axis=1)
        s = p / np.sum(1.0 / tau)
        np.testing.assert_allclose(terms, 0.0625 * r * s, rtol=1e-8)


class TestGenFactors:

    def test_deterministic(self):
        a = gen_factors(30, 3, np.random.default_rng(9))
        b = gen_factors(30, 3, np.random.default_rng(9))
        np.testing.assert_array_equal(a, b)

    def test_stationary_moments(self):
        F = gen_factors(5000, 3, np.random.default_rng(10))
        variance = F.var(axis=0, ddof=1)
        np.testing.assert_allclose(variance, 1 / 0.96, rtol=0.1)
        for k in range(3):
            lag1 = np.corrcoef(F[1:, k], F[:-1, k])[0, 1]
            assert abs(lag1 - 0.2) < 0.05


class TestGenErrors:

    def test_zero_variance(self):
        E = gen_errors(10, 12, 0.0, np.random.default_rng(0))
        np.testing.assert_array_equal(E, np.zeros((10, 12)))

    def test_band_structure(self):
        P = banded_mixing(8)
        assert np.all(np.count_nonzero(P, axis=1) <= 5)
        assert np.all(np.diag(P) == 1.0)
        np.testing.assert_array_equal(np.diag(P, k=2), np.full(6, 0.2))
        assert np.all(np.diag(P, k=3) == 0)

    def test_cross_sectional_covariance(self):
        T, p, sigma2 = 20000, 6, 2.0
        E = gen_errors(T, p, sigma2, np.random.default_rng(11))
        P1, P2 = banded_mixing(T), banded_mixing(p)
        # Interior rows of P1 all have the same squared norm
        row_scale = float(P1[T // 2] @ P1[T // 2])
        expected = sigma2 * row_scale * P2.T @ P2
        empirical = E.T @ E / T
        np.testing.assert_allclose(empirical, expected, rtol=0.1, atol=0.1 * sigma2)

    def test_small_dimensions_rejected(self):
        with pytest.raises(SimulationError):
            gen_errors(2, 10, 1.0, np.random.default_rng(0))


class TestMseCommon:

    def test_values(self):
        C = np.random.default_rng(0).standard_normal((4, 5))
        assert mse_common(C, C) == 0.0
        assert mse_common(C + 1.0, C) == pytest.approx(1.0)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(1)
        a, b = rng.standard_normal((6, 7)), rng.standard_normal((6, 7))
        total = sum((a[t, j] - b[t, j]) ** 2 for t in range(6) for j in range(7))
        assert mse_common(a, b) == pytest.approx(total / 42, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(SimulationError):
            mse_common(np.zeros((2, 3)), np.zeros((3, 2)))

    def test_selection_summary_format(self):
        summary = SelectionSummary.from_values([3, 3, 2, 4, 3], 3)
        assert (summary.under, summary.over) == (1, 1)
        assert summary.formatted() == "3.000(1|1)"


class TestSimulationConfig:

    def test_rank_must_be_small(self):
        with pytest.raises(ValidationError):
            SimulationConfig(case=1, p=10, T=3, r=3)

    def test_case_two_needs_large_p(self):
        with pytest.raises(ValidationError):
            SimulationConfig(case=2, p=40, T=20)

    def test_default_grids(self):
        grids = SimulationConfig(case=1, p=100, T=20).tuning_grids()
        assert 100.0 in grids.alphas
        assert grids.ms[-1] == 63


class TestRunCase:

    def setup_method(self):
        self.config = SimulationConfig(case=4, p=80, T=20, reps=4, seed=123, k_max=5)

    def test_replication_streams_differ(self):
        a = replication_rng(1, 0).standard_normal(3)
        b = replication_rng(1, 1).standard_normal(3)
        assert not np.allclose(a, b)

    def test_replication_records_every_method(self):
        result = run_replication(self.config, 0)
        assert set(result.mse) == {"pca", "lap", "proj"}
        assert set(result.r_hat) == {"er", "one_step_lap", "one_step_proj"}
        assert all(value >= 0 for value in result.mse.values())

    def test_deterministic_and_parallel_safe(self):
        serial = run_case(self.config)
        parallel = run_case(self.config, n_jobs=2)
        assert serial.rows() == parallel.rows()
        assert serial.mse_values == parallel.mse_values

    def test_report_consistency(self):
        report = run_case(self.config)
        for method, summary in report.mse.items():
            values = report.mse_values[method]
            assert min(values) <= summary.mean <= max(values)
        for summary in report.selection.values():
            assert summary.under + summary.over <= summary.n == 4
        assert [row["method"] for row in report.rows()] == ["pca", "lap", "proj"]
        assert report.wall_clock_seconds > 0

    def test_mse_only_study(self):
        config = self.config.model_copy(update={"study": "mse", "reps": 2})
        report = run_case(config)
        assert report.selection == {}
        assert all(row["mean_r"] is None for row in report.rows())


class TestGroupedNetworkMse:

    def setup_method(self):
        self.p, self.T = 600, 50
        self.unequal = [0.4, 0.25, 0.15, 0.1, 0.06, 0.04]
        self.equal = [0.1] * 10

    @pytest.mark.parametrize("z", [0.05, 0.1, 0.5])
    @pytest.mark.parametrize("exact", [False, True])
    def test_laplacian_not_worse(self, z, exact):
        lap = grouped_network_mse("laplacian", self.unequal, z, self.p, self.T, exact=exact)
        proj = grouped_network_mse("projection", self.unequal, z, self.p, self.T, exact=exact)
        assert lap <= proj

    @pytest.mark.parametrize("z", [0.05, 0.1, 0.5])
    def test_equal_groups_coincide(self, z):
        lap = grouped_network_mse("laplacian", self.equal, z, self.p, self.T, exact=True)
        proj = grouped_network_mse("projection", self.equal, z, self.p, self.T, exact=True)
        assert abs(lap - proj) < 1e-12

    def test_large_z_limit(self):
        value = grouped_network_mse("laplacian", self.unequal, 1e12, self.p, self.T)
        assert value == pytest.approx(1 / self.T, rel=1e-9)

    @pytest.mark.parametrize("theta", [[1.0], [0.5, 0.0, 0.5], [0.3, 0.3]])
    def test_invalid_groups_rejected(self, theta):
        with pytest.raises(SimulationError):
            grouped_network_mse("laplacian", theta, 0.1, 100, 50)

    @pytest.mark.parametrize("theta,p,expected", [
        ([1 / 3] * 3, 100, [34, 33, 33]),
        ([0.5, 0.25, 0.25], 7, [3, 2, 2]),
        ([0.4, 0.25, 0.15, 0.1, 0.06, 0.04], 600, [240, 150, 90, 60, 36, 24]),
    ])
    def test_sizes_partition_p(self, theta, p, expected):
        sizes = group_sizes(theta, p)
        assert sizes.tolist() == expected
        assert sizes.sum() == p

    def test_uneven_equal_groups_coincide(self):
        lap = grouped_network_mse("laplacian", [1 / 3] * 3, 0.1, 100, 50, exact=True)
        proj = grouped_network_mse("projection", [1 / 3] * 3, 0.1, 100, 50, exact=True)
        assert abs(lap - proj) < 1e-12
