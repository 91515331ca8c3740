"""Tests for the C_L criterion, grids, factor-number selection and oracle diagnostics."""

import math

import numpy as np
import pytest

from src.errors import TuningError
from src.estimation import PenaltyKind, fit, identity_operator, shrink_weights
from src.graph import build_network, laplacian_spectrum
from src.simulation import gen_loadings, gen_network
from src.tuning import (
    TuningGrids,
    adjusted_error,
    cl_score,
    default_grids,
    eigenvalue_ratios,
    estimate_noise_variance,
    factors_remain_strong,
    loading_risk,
    oracle_alpha,
    risk_derivative,
    select_r_er,
    select_r_one_step,
    shrunk_loading_eigs,
    tune,
)

from conftest import random_instance, random_network


class TestNoiseVariance:

    def test_exact_rank_gives_zero(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((12, 2)) @ rng.standard_normal((2, 20))
        spec = laplacian_spectrum(random_network(20, 0.3, rng))
        assert estimate_noise_variance(X, spec, 2) < 1e-12

    def test_homogeneous_of_degree_two(self):
        X, _, spec = random_instance(15, 25, 2, seed=3)
        base = estimate_noise_variance(X, spec, 2)
        assert estimate_noise_variance(3.0 * X, spec, 2) == pytest.approx(9.0 * base, rel=1e-10)

    def test_iid_noise_level(self):
        values = []
        for seed in range(50):
            rng = np.random.default_rng(seed)
            X = rng.standard_normal((50, 200))
            spec = laplacian_spectrum(build_network([], 200))
            values.append(estimate_noise_variance(X, spec, 3))
        assert 0.8 < np.mean(values) < 1.0


class TestClScore:

    def setup_method(self):
        self.spec = laplacian_spectrum(build_network([(0, 1)], 2))

    def test_arithmetic_example(self):
        X = np.array([[1.0, 1.0], [-1.0, -1.0]])
        op = shrink_weights(self.spec, "laplacian", 1.0)
        est = fit(X, self.spec, identity_operator(self.spec), 1)
        assert op.trace_inv == pytest.approx(4 / 3)
        assert cl_score(X, est, op, 1.0, 1) == pytest.approx(2 / 3)
        assert adjusted_error(X, est, op, 1.0, 1) == pytest.approx(-1 / 3)

    def test_plain_pca_identity(self):
        X, _, spec = random_instance(20, 30, 3, seed=6)
        op = identity_operator(spec)
        est = fit(X, spec, op, 3)
        sigma2 = estimate_noise_variance(X, spec, 3)
        assert cl_score(X, est, op, sigma2, 3) == pytest.approx(sigma2 * (1 + 2 * 3 / 20), rel=1e-12)

    def test_smaller_trace_scores_lower(self):
        X, _, spec = random_instance(20, 30, 2, seed=6)
        est = fit(X, spec, identity_operator(spec), 2)
        weak = shrink_weights(spec, "laplacian", 0.5)
        strong = shrink_weights(spec, "laplacian", 5.0)
        assert cl_score(X, est, strong, 1.0, 2) < cl_score(X, est, weak, 1.0, 2)

    def test_negative_sigma2_rejected(self):
        X = np.array([[1.0, 1.0], [-1.0, -1.0]])
        est = fit(X, self.spec, identity_operator(self.spec), 1)
        with pytest.raises(TuningError):
            cl_score(X, est, est.operator, -1.0, 1)


class TestDefaultGrids:

    def test_alpha_grid(self):
        grids = default_grids(100)
        for value in (0.0, 1.0, 19.0, 100.0):
            assert value in grids.alphas
        assert list(grids.alphas) == sorted(set(grids.alphas))
        assert len(grids.alphas) == 21

    def test_m_grid(self):
        assert default_grids(100).ms == (2, 3, 4, 6, 10, 16, 25, 40, 63)

    def test_m_grid_deduplicates(self):
        ms = default_grids(4).ms
        assert len(ms) == len(set(ms))
        assert ms.count(1) == 1

    def test_small_p_rejected(self):
        with pytest.raises(TuningError):
            default_grids(1)


class TestTune:

    def setup_method(self):
        self.X, _, self.spec = random_instance(20, 40, 2, seed=17)

    def test_single_point_grid(self):
        grids = TuningGrids(alphas=(2.0,), ms=(5,))
        result = tune(self.X, self.spec, "projection", 2, grids)
        assert (result.alpha_star, result.m_star) == (2.0, 5)
        assert len(result.score_table) == 1

    @pytest.mark.parametrize("kind", ["laplacian", "projection"])
    def test_returns_table_minimum(self, kind):
        result = tune(self.X, self.spec, kind, 2)
        best = min(result.score_table, key=lambda e: e.key)
        assert (result.alpha_star, result.m_star) == (best.alpha, best.m)
        assert result.best_score == min(e.score for e in result.score_table)

    @pytest.mark.parametrize("kind", ["laplacian", "projection"])
    def test_never_worse_than_plain_pca(self, kind):
        result = tune(self.X, self.spec, kind, 2)
        op = identity_operator(self.spec)
        plain = cl_score(self.X, fit(self.X, self.spec, op, 2), op, result.sigma2_hat, 2)
        assert result.best_score <= plain + 1e-15

    def test_empty_grid_rejected(self):
        with pytest.raises(TuningError, match="empty"):
            tune(self.X, self.spec, "laplacian", 2, TuningGrids(alphas=()))

    def test_plain_kind_rejected(self):
        with pytest.raises(TuningError):
            tune(self.X, self.spec, "none", 2)

    def test_ties_prefer_smaller_alpha(self):
        spec = laplacian_spectrum(build_network([], 40))
        result = tune(self.X, spec, "projection", 2, TuningGrids(alphas=(0.0, 1.0, 3.0), ms=(4, 8)))
        assert (result.alpha_star, result.m_star) == (0.0, 4)

    def test_noiseless_network_misaligned_loadings(self):
        rng = np.random.default_rng(5)
        net = random_network(30, 0.3, rng)
        spec = laplacian_spectrum(net)
        B = spec.eigvecs[:, :2] * 4.0
        F = rng.standard_normal((15, 2))
        X = F @ B.T
        result = tune(X, spec, "laplacian", 2)
        assert result.alpha_star == 0.0


class TestEigenvalueRatios:

    def test_arithmetic(self):
        ratios = eigenvalue_ratios(np.array([10, 5, 1, 0.5, 0.4]), 4)
        np.testing.assert_allclose(ratios, [2, 5, 2, 1.25])
        assert int(np.argmax(ratios)) + 1 == 2

    def test_zero_tail(self):
        ratios = eigenvalue_ratios(np.array([8.0, 4.0, 0.0, 0.0]), 3)
        assert np.isinf(ratios[1])
        assert int(np.argmax(ratios)) + 1 == 2

    def test_all_equal(self):
        ratios = eigenvalue_ratios(np.ones(6), 5)
        assert int(np.argmax(ratios)) + 1 == 1

    def test_floor_follows_leading_eigenvalue(self):
        eigvals = np.array([10, 5, 1, 0.5, 0.4])
        np.testing.assert_allclose(
            eigenvalue_ratios(1e-14 * eigvals, 4), eigenvalue_ratios(eigvals, 4), rtol=1e-12
        )

    def test_zero_spectrum(self):
        assert np.all(np.isinf(eigenvalue_ratios(np.zeros(5), 4)))

    @pytest.mark.parametrize("k_max", [0, 5])
    def test_out_of_range(self, k_max):
        with pytest.raises(TuningError):
            eigenvalue_ratios(np.ones(5), k_max)


class TestSelectR:

    def setup_method(self):
        rng = np.random.default_rng(42)
        self.spec = laplacian_spectrum(random_network(60, 0.2, rng))
        F = rng.standard_normal((40, 3))
        B = 2.0 * rng.standard_normal((60, 3))
        self.X = F @ B.T + rng.standard_normal((40, 60))

    def test_er_finds_strong_factors(self):
        result = select_r_er(self.X, self.spec, k_max=8)
        assert result.r_hat == 3
        assert result.method == "er"
        assert len(result.ratios) == 8

    @pytest.mark.parametrize("scale", [7.5, 1e-7, 1e7])
    def test_scale_invariance(self, scale):
        a = select_r_er(self.X, self.spec, k_max=8)
        b = select_r_er(scale * self.X, self.spec, k_max=8)
        assert a.r_hat == b.r_hat
        np.testing.assert_allclose(a.ratios, b.ratios, rtol=1e-9)

    def test_k_max_out_of_range(self):
        with pytest.raises(TuningError):
            select_r_er(self.X, self.spec, k_max=40)

    def test_one_step_with_zero_alpha_equals_er(self):
        grids = TuningGrids(alphas=(0.0,), ms=(5,))
        plain = select_r_er(self.X, self.spec, k_max=8)
        for kind in ("laplacian", "projection"):
            result = select_r_one_step(self.X, self.spec, kind, k_max=8, grids=grids)
            assert result.r_hat == plain.r_hat
            np.testing.assert_allclose(result.ratios, plain.ratios)

    def test_one_step_history(self):
        result = select_r_one_step(self.X, self.spec, "laplacian", k_max=8, max_steps=3)
        assert result.method == "one_step_lap"
        assert result.r_history[0] == 3
        assert result.r_history[-1] == result.r_hat
        assert result.converged
        assert result.tuning is not None


class TestOracle:

    def test_projection_arithmetic(self):
        # ||U1^T B||_F^2 = 2 with p=100, T=50
        spec = laplacian_spectrum(build_network([], 100))
        B = np.zeros((100, 1))
        B[0, 0] = 1.0
        B[1, 0] = 1.0
        assert oracle_alpha("projection", B, spec, 50, m=10).value == pytest.approx(1.0)

    def test_laplacian_unbounded(self):
        net = build_network([(0, 1), (1, 2)], 3)
        spec = laplacian_spectrum(net)
        B = np.ones((3, 1))
        oracle = oracle_alpha("laplacian", B, spec, 20)
        assert oracle.unbounded and math.isinf(oracle.value)
        assert oracle.capped(300.0) == 300.0

    def test_case_three_constant_term(self):
        rng = np.random.default_rng(12)
        p, r, T = 150, 3, 50
        spec = laplacian_spectrum(gen_network(3, p, rng))
        B = gen_loadings(3, spec, p, r, rng)

        d = int(np.sum(spec.eigvals < 0.001))
        tau = spec.eigvals[: p - d]
        terms = tau * np.sum(spec.rotate(B)[: p - d] ** 2, axis=1)
        z = 0.0625 * r * p / np.sum(1.0 / tau)
        np.testing.assert_allclose(terms, z, rtol=1e-8)
        assert oracle_alpha("laplacian", B, spec, T).value == pytest.approx(1.0 / (T * z), rel=1e-8)

    def test_plain_kind_rejected(self):
        spec = laplacian_spectrum(build_network([], 3))
        with pytest.raises(TuningError):
            oracle_alpha("none", np.ones((3, 1)), spec, 10)


class TestLoadingRisk:

    def setup_method(self):
        rng = np.random.default_rng(77)
        self.spec = laplacian_spectrum(random_network(40, 0.2, rng))
        self.B = rng.standard_normal((40, 3))

    def test_no_shrinkage(self):
        assert loading_risk(self.B, self.spec, identity_operator(self.spec), 25) == pytest.approx(1 / 25)

    @pytest.mark.parametrize("alpha,m", [(0.5, 5), (3.0, 10), (20.0, 30)])
    def test_projection_closed_form(self, alpha, m):
        p, T = 40, 25
        op = shrink_weights(self.spec, "projection", alpha, m)
        norm1 = np.sum(self.spec.rotate(self.B)[: p - m] ** 2)
        expected = (
            alpha ** 2 * norm1 / (p * (1 + alpha) ** 2)
            + (p - m) / (p * T * (1 + alpha) ** 2)
            + m / (p * T)
        )
        assert loading_risk(self.B, self.spec, op, T) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.1, 1.0, 4.0])
    def test_derivative_matches_finite_difference(self, alpha):
        T, h = 25, 1e-6

        def risk(a):
            return loading_risk(self.B, self.spec, shrink_weights(self.spec, "laplacian", a), T)

        numeric = (risk(alpha + h) - risk(alpha - h)) / (2 * h)
        assert risk_derivative(self.B, self.spec, alpha, T) == pytest.approx(numeric, rel=1e-5, abs=1e-10)

    @pytest.mark.parametrize("seed", range(20))
    def test_oracle_projection_is_grid_minimum(self, seed):
        rng = np.random.default_rng(seed)
        p, T, m = (200, 300)[seed % 2], 50, 50
        spec = laplacian_spectrum(gen_network(2, p, rng))
        B = gen_loadings(2, spec, p, 3, rng)

        alpha = oracle_alpha("projection", B, spec, T, m=m).value
        at_oracle = loading_risk(B, spec, shrink_weights(spec, "projection", alpha, m), T)
        for grid_alpha in default_grids(p).alphas:
            grid_value = loading_risk(B, spec, shrink_weights(spec, "projection", grid_alpha, m), T)
            assert at_oracle <= grid_value + 1e-12


class TestShrunkLoadingEigs:

    def test_identity_operator(self):
        rng = np.random.default_rng(2)
        spec = laplacian_spectrum(random_network(30, 0.3, rng))
        Q, _ = np.linalg.qr(rng.standard_normal((30, 3)))
        B = np.sqrt(30) * Q
        np.testing.assert_allclose(shrunk_loading_eigs(B, spec, identity_operator(spec)), 1.0)

    def test_projection_spares_trailing_block(self):
        rng = np.random.default_rng(3)
        spec = laplacian_spectrum(random_network(30, 0.3, rng))
        B = spec.eigvecs[:, 20:] @ rng.standard_normal((10, 2))
        plain = shrunk_loading_eigs(B, spec, identity_operator(spec))
        shrunk = shrunk_loading_eigs(B, spec, shrink_weights(spec, "projection", 5.0, m=10))
        np.testing.assert_allclose(shrunk, plain, rtol=1e-10)

    def test_matches_dense(self):
        rng = np.random.default_rng(4)
        spec = laplacian_spectrum(random_network(25, 0.3, rng))
        op = shrink_weights(spec, "laplacian", 2.0)
        B = rng.standard_normal((25, 3))
        D = np.eye(25) + 2.0 * spec.normalized_laplacian()
        dense = np.sort(np.linalg.eigvalsh(B.T @ np.linalg.solve(D, B) / 25))[::-1]
        np.testing.assert_allclose(shrunk_loading_eigs(B, spec, op), dense, atol=1e-10)

    def test_factors_remain_strong(self):
        assert factors_remain_strong(np.array([3.0, 2.0, 1.0]), 0.5)
        assert not factors_remain_strong(np.array([3.0, 0.1]), 0.5)
