import itertools
import math

import numpy as np
import pytest

import mcar
from mcar import SolverConfig, SolverDivergenceError
from mcar.solver import default_lambda, shrink, svt
from helpers import error_of, separable_dataset, tiny_brute_force_dataset


def svt_oracle(A, tau):
    """Independent reference: full SVD, explicit threshold, reconstruct."""
    U, s, Vt = np.linalg.svd(A)
    s = np.array([max(x - tau, 0.0) for x in s])
    S = np.zeros(A.shape)
    np.fill_diagonal(S, s)
    return U @ S @ Vt


def shrink_oracle(a, B):
    out = np.zeros_like(B, dtype=float)
    for idx, b in np.ndenumerate(B):
        out[idx] = math.copysign(max(abs(b) - a, 0.0), b)
    return out


class TestShrink:
    def test_above_threshold(self):
        np.testing.assert_allclose(shrink(0.5, np.array([1.2])), [0.7])

    def test_dead_zone(self):
        np.testing.assert_allclose(shrink(0.5, np.array([-0.3])), [0.0])

    def test_identity_at_zero(self):
        B = np.random.default_rng(0).normal(size=(4, 5))
        np.testing.assert_array_equal(shrink(0.0, B), B)

    def test_matches_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            B = rng.normal(size=(6, 7))
            a = float(rng.uniform(0, 2))
            np.testing.assert_allclose(shrink(a, B), shrink_oracle(a, B), atol=1e-8)


class TestSvt:
    def test_zero_threshold_reconstructs(self):
        A = np.random.default_rng(2).normal(size=(5, 4))
        np.testing.assert_allclose(svt(A, 0.0), A, atol=1e-10)

    def test_diagonal_case(self):
        A = np.diag([3.0, 1.0])
        np.testing.assert_allclose(svt(A, 2.0), np.diag([1.0, 0.0]), atol=1e-12)

    def test_threshold_at_second_singular_value(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(6, 4))
        s = np.linalg.svd(A, compute_uv=False)
        out = svt(A, float(s[1]))
        out_s = np.linalg.svd(out, compute_uv=False)
        assert np.sum(out_s > 1e-10 * max(out_s[0], 1)) <= 1
        np.testing.assert_allclose(out, svt_oracle(A, float(s[1])), atol=1e-8)

    def test_matches_oracle_random(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            A = rng.normal(size=(int(rng.integers(2, 51)), int(rng.integers(2, 51))))
            tau = float(rng.uniform(0, 3))
            ours = svt(A, tau)
            ref = svt_oracle(A, tau)
            assert np.abs(ours - ref).max() <= 1e-8 * max(1.0, np.abs(ref).max())


class TestDefaultLambda:
    def test_large_feature_dim(self):
        val = default_lambda(16, 5400, 1122)
        assert val == pytest.approx(1 / math.sqrt(5416))
        assert abs(val - 0.013589) <= 1e-6

    def test_branch_tie(self):
        assert default_lambda(4, 6, 10) == pytest.approx(1 / math.sqrt(10))

    def test_smallest_legal(self):
        assert default_lambda(1, 1, 1) == pytest.approx(1 / math.sqrt(2))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            default_lambda(1, 0, 1)


class TestSolverConfig:
    def test_rejects_bad_rho(self):
        with pytest.raises(ValueError):
            SolverConfig(rho=1.0)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            SolverConfig(lam=-1.0)

    def test_rejects_inverted_mu_range(self):
        with pytest.raises(ValueError):
            SolverConfig(mu0=1.0, mu_max=0.5)


class TestWmcarSolve:
    def test_unambiguous_input_pins_labels(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(8, 12))
        candidates = [(int(j % 3),) for j in range(12)]
        ds = mcar.AmbiguousDataset(X, candidates, 3)
        result = mcar.wmcar_solve(ds)
        expected = mcar.init_soft_labels(candidates, 3)
        np.testing.assert_allclose(result.Y, expected, rtol=0, atol=1e-12)

    def test_noiseless_separable_recovery(self):
        ds, _ = separable_dataset(seed=1, num_classes=3, vertices=2, dim=20,
                                  per_class=10, fraction=0.9, extra=1)
        result = mcar.wmcar_solve(ds)
        assert error_of(result.Y, ds.candidates, ds.ground_truth) == 0.0

    def test_identity_weights_match_mcar(self):
        for seed in range(3):
            ds, _ = separable_dataset(seed=seed)
            P = mcar.init_soft_labels(ds.candidates, ds.num_classes)
            a = mcar.wmcar_solve(ds, P=P, W=np.ones(ds.num_instances))
            b = mcar.mcar_solve(ds, P=P)
            assert np.abs(a.Y - b.Y).max() <= 1e-8

    def test_result_satisfies_feasibility(self):
        ds, _ = separable_dataset(seed=2)
        result = mcar.wmcar_solve(ds)
        mcar.validate_soft_labels(result.Y, ds.candidates)
        assert result.converged
        assert result.final_residual < 1e-7
        assert result.iterations <= 500

    def test_every_projected_iterate_feasible(self):
        from mcar.solver import _project_columns

        ds, _ = separable_dataset(seed=10)
        P = mcar.init_soft_labels(ds.candidates, ds.num_classes)
        W = mcar.weight_matrix(P)
        seen = []

        def spying_project(Yb, cands, w):
            out = _project_columns(Yb, cands, w)
            seen.append(out.copy())
            return out

        mcar.wmcar_solve(ds, P=P, W=W, project=spying_project)
        assert len(seen) >= 1
        for Yb in seen:
            assert np.min(Yb) >= 0
            np.testing.assert_allclose(Yb.sum(axis=0), W, atol=1e-9)
            mask = np.zeros_like(Yb, dtype=bool)
            for j, labels in enumerate(ds.candidates):
                mask[list(labels), j] = True
            assert np.all(Yb[~mask] == 0)

    def test_constraint_split_consistency(self):
        ds, _ = separable_dataset(seed=3)
        result = mcar.wmcar_solve(ds)
        P = mcar.init_soft_labels(ds.candidates, ds.num_classes)
        scale = max(1.0, np.abs(P).max())
        assert np.abs(P - result.E_P - result.Y).max() <= 1e-6 * scale
        x_scale = max(1.0, np.abs(ds.features).max())
        assert np.abs(ds.features - result.E_X - result.Z).max() <= 1e-6 * x_scale

    def test_scale_equivariance_of_predictions(self):
        ds, _ = separable_dataset(seed=4)
        base = mcar.mcar_solve(ds)
        scaled = mcar.wmcar_solve(ds, W=np.full(ds.num_instances, 7.5))
        np.testing.assert_array_equal(
            mcar.predict_labels(base.Y, ds.candidates),
            mcar.predict_labels(scaled.Y, ds.candidates),
        )

    def test_determinism(self):
        ds, _ = separable_dataset(seed=6)
        a = mcar.wmcar_solve(ds)
        b = mcar.wmcar_solve(ds)
        np.testing.assert_array_equal(a.Y, b.Y)
        assert a.iterations == b.iterations

    @pytest.mark.filterwarnings("ignore:overflow")
    def test_divergence_reports_iteration(self):
        ds, _ = separable_dataset(seed=7)
        config = SolverConfig(mu0=1e300, mu_max=1e308, tol=1e-300, max_iter=50)
        with pytest.raises(SolverDivergenceError) as info:
            mcar.wmcar_solve(ds, config=config)
        assert info.value.iteration >= 1

    def test_bad_weights_rejected(self):
        ds, _ = separable_dataset(seed=8)
        with pytest.raises(ValueError):
            mcar.wmcar_solve(ds, W=np.zeros(ds.num_instances))

    def test_sparse_corruption_recovered(self):
        spec = mcar.ConvexHullSpec(
            num_classes=3, vertices_per_class=2, ambient_dim=20,
            samples_per_class=10, sparse_fraction=0.05, sparse_magnitude=3.0,
            seed=9,
        )
        params = mcar.AmbiguityParams(fraction=0.9, extra_count=1, epsilon=0.5, seed=9)
        noisy, _ = mcar.synthesize_dataset(spec, params)
        result = mcar.mcar_solve(noisy)
        assert error_of(result.Y, noisy.candidates, noisy.ground_truth) == 0.0


class TestMcarSolve:
    def test_degenerate_identical_columns(self):
        X = np.ones((6, 4))
        ds = mcar.AmbiguousDataset(X, [(0, 1), (0, 1), (2,), (2,)], 3)
        result = mcar.mcar_solve(ds)  # must terminate without error
        assert np.isfinite(result.final_residual)

    def test_brute_force_rank_oracle(self):
        """The solve attains the minimum enumerated rank over hard labelings."""
        hits = 0
        for seed in range(10):
            ds, _ = tiny_brute_force_dataset(seed)
            X = ds.features
            ranks = {}
            for assign in itertools.product(*ds.candidates):
                Y = np.zeros((3, 6))
                Y[list(assign), np.arange(6)] = 1.0
                s = np.linalg.svd(np.vstack([Y, X]), compute_uv=False)
                ranks[assign] = int(np.sum(s > 1e-8 * s[0]))
            best = min(ranks.values())
            result = mcar.mcar_solve(ds)
            pred = tuple(mcar.predict_labels(result.Y, ds.candidates).tolist())
            hits += (ranks[pred] == best)
        assert hits >= 9
