import math

import numpy as np
import pytest

import mcar
from mcar import DataError, IceConfig
from mcar.ice import least_likely_candidate, select_elimination_set
from helpers import error_of, majority_extra_dataset, separable_dataset


class TestLeastLikelyCandidate:
    def test_plain_argmin(self):
        Y = np.array([[0.6], [0.3], [0.1]])
        assert least_likely_candidate(Y, (0, 1, 2), 0) == (2, pytest.approx(0.1))

    def test_tie_breaks_low(self):
        Y = np.array([[0.5], [0.5]])
        assert least_likely_candidate(Y, (0, 1), 0) == (0, pytest.approx(0.5))

    def test_singleton(self):
        Y = np.array([[0.2], [0.8]])
        assert least_likely_candidate(Y, (1,), 0) == (1, pytest.approx(0.8))


class TestSelectEliminationSet:
    def test_half_of_five(self):
        assert math.ceil(0.5 * 5) == 3
        scores = [(j, s) for j, s in enumerate([0.5, 0.1, 0.4, 0.2, 0.3])]
        chosen = select_elimination_set(scores, range(5), 0.5)
        assert chosen == [1, 3, 4]

    def test_factor_one_takes_all(self):
        scores = [(j, float(j)) for j in range(4)]
        assert select_elimination_set(scores, range(4), 1.0) == [0, 1, 2, 3]

    def test_factor_zero_takes_none(self):
        scores = [(j, float(j)) for j in range(4)]
        assert select_elimination_set(scores, range(4), 0.0) == []

    def test_cutoff_ties_break_by_instance_index(self):
        scores = [(0, 0.3), (1, 0.1), (2, 0.3), (3, 0.3)]
        # one slot remains after the clear minimum; the tie at 0.3 goes to 0
        assert select_elimination_set(scores, range(4), 0.5) == [0, 1]

    def test_ignores_non_ambiguous_scores(self):
        scores = [(0, 0.0), (1, 0.2), (2, 0.1)]
        assert select_elimination_set(scores, [1, 2], 0.5) == [2]


class TestIceLoop:
    def test_all_singletons_is_identity(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(5, 6))
        ds = mcar.AmbiguousDataset(X, [(j % 2,) for j in range(6)], 2)
        result, trace = mcar.wmcar_ice(ds)
        assert trace.records == ()
        np.testing.assert_array_equal(
            result.Y, mcar.init_soft_labels(ds.candidates, 2)
        )
        assert result.iterations == 0 and result.converged

    def test_full_factor_single_outer(self):
        ds, _ = separable_dataset(seed=3, fraction=1.0, extra=1)
        config = IceConfig(elimination_factor=1.0, max_outer=5)
        result, trace = mcar.wmcar_ice(ds, config)
        assert len(trace.records) == 1
        assert all(len(s) == 1 for s in trace.final_candidates)

    def test_elimination_counts_exact(self):
        for seed in range(5):
            ds, _ = separable_dataset(seed=seed, fraction=0.8, extra=2, num_classes=4,
                                      dim=25, per_class=8)
            _, trace = mcar.wmcar_ice(ds, IceConfig(elimination_factor=0.5))
            for record in trace.records:
                assert len(record.eliminated) == math.ceil(0.5 * record.num_ambiguous)

    def test_cardinalities_monotone_nonincreasing(self):
        ds, _ = separable_dataset(seed=11, fraction=0.9, extra=2, num_classes=4,
                                  dim=25, per_class=8)
        _, trace = mcar.wmcar_ice(ds)
        sizes = [tuple(len(s) for s in ds.candidates)]
        sizes += [r.candidate_sizes for r in trace.records]
        for before, after in zip(sizes, sizes[1:]):
            assert all(a >= b for a, b in zip(before, after))

    def test_halts_within_budget(self):
        ds, _ = separable_dataset(seed=12, fraction=1.0, extra=2, num_classes=4,
                                  dim=25, per_class=8)
        _, trace = mcar.wmcar_ice(ds, IceConfig(max_outer=5))
        assert len(trace.records) <= 5

    def test_eliminated_label_never_the_last_one(self):
        ds, _ = separable_dataset(seed=13, fraction=0.7, extra=1)
        _, trace = mcar.wmcar_ice(ds)
        assert all(size >= 1 for r in trace.records for size in r.candidate_sizes)

    def test_y_complies_with_updated_candidates(self):
        ds, _ = separable_dataset(seed=14, fraction=0.9, extra=2, num_classes=4,
                                  dim=25, per_class=8)
        result, trace = mcar.wmcar_ice(ds)
        mcar.validate_soft_labels(result.Y, trace.final_candidates)

    def test_trace_records_errors_when_truth_known(self):
        ds, _ = separable_dataset(seed=15)
        _, trace = mcar.wmcar_ice(ds)
        assert all(r.error_rate is not None for r in trace.records)

    def test_weighted_beats_single_solve_on_imbalance(self):
        """Paired-seed comparison on the majority-extra scenario, 20 seeds."""
        ice_errors, single_errors = [], []
        for seed in range(20):
            ds = majority_extra_dataset(seed)
            single = mcar.wmcar_solve(ds)
            single_errors.append(error_of(single.Y, ds.candidates, ds.ground_truth))
            result, trace = mcar.wmcar_ice(ds)
            ice_errors.append(error_of(result.Y, trace.final_candidates, ds.ground_truth))
        assert np.mean(ice_errors) <= np.mean(single_errors)

    def test_mcar_ice_ignores_weights(self):
        ds = majority_extra_dataset(2)
        unweighted, trace_u = mcar.mcar_ice(ds)
        weighted, trace_w = mcar.wmcar_ice(ds)
        # the two variants make different elimination choices on imbalanced data
        assert (
            trace_u.final_candidates != trace_w.final_candidates
            or np.abs(unweighted.Y - weighted.Y).max() > 1e-12
        )

    def test_invalid_config_rejected(self):
        with pytest.raises(DataError):
            IceConfig(elimination_factor=1.5)
        with pytest.raises(DataError):
            IceConfig(max_outer=-1)
