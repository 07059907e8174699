import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from baitscore.metrics import (
    Scored,
    auc,
    binary_metrics,
    evaluate_scored,
    mse,
    roc_curve,
    trapezoid_area,
)

from oracles import auc_by_pairs


def scored(probs, labels, means=None):
    means = means or [None] * len(probs)
    return [Scored(p, y, m) for p, y, m in zip(probs, labels, means)]


class TestBinaryMetrics:
    def test_all_correct(self):
        rep = binary_metrics(scored([0.9, 0.1, 0.8, 0.2], [1, 0, 1, 0]))
        assert rep.accuracy == 1.0
        assert rep.f1_pos == 1.0
        assert rep.f1_weighted == 1.0

    def test_hand_confusion_matrix(self):
        rep = binary_metrics(scored([0.9, 0.8, 0.4, 0.2], [1, 0, 1, 0]))
        assert (rep.tp, rep.fp, rep.fn, rep.tn) == (1, 1, 1, 1)
        assert rep.accuracy == 0.5
        assert rep.precision_pos == 0.5
        assert rep.recall_pos == 0.5
        assert rep.f1_pos == 0.5

    def test_all_negative_predictions_flagged(self):
        rep = binary_metrics(scored([0.1, 0.2, 0.3], [0, 1, 1]))
        assert rep.recall_pos == 0.0
        assert "precisionPos" in rep.zero_denominator

    def test_confusion_counts_partition(self):
        rng = np.random.default_rng(0)
        probs = rng.random(50)
        labels = rng.integers(0, 2, 50)
        rep = binary_metrics(scored(probs.tolist(), labels.tolist()))
        assert rep.tp + rep.fp + rep.tn + rep.fn == 50

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            binary_metrics([])

    def test_threshold_is_inclusive(self):
        rep = binary_metrics(scored([0.5], [1]))
        assert rep.tp == 1


class TestMse:
    def test_exact_probabilities(self):
        assert mse(scored([1.0, 0.0], [1, 0])) == 0.0

    def test_half_probabilities(self):
        assert mse(scored([0.5] * 4, [0, 0, 1, 1])) == 0.25

    def test_truth_mean_target(self):
        assert mse(scored([0.8], [1], [0.6]), target="truthMean") == pytest.approx(0.04)

    def test_missing_truth_mean_rejected(self):
        with pytest.raises(ValueError):
            mse(scored([0.8], [1]), target="truthMean")

    def test_accuracy_complement_identity(self):
        # with probabilities exactly 0/1, accuracy == 1 - mse(hard label)
        rng = np.random.default_rng(1)
        labels = rng.integers(0, 2, 30).tolist()
        probs = [float(rng.integers(0, 2)) for _ in range(30)]
        rows = scored(probs, labels)
        rep = binary_metrics(rows)
        assert rep.accuracy == pytest.approx(1.0 - mse(rows))


class TestRoc:
    def test_perfect_separation_passes_corner(self):
        points = roc_curve(scored([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]))
        assert (0.0, 1.0) in [(p[0], p[1]) for p in points]
        assert points[0][:2] == (0.0, 0.0)
        assert points[-1][:2] == (1.0, 1.0)

    def test_constant_scores(self):
        points = roc_curve(scored([0.5, 0.5, 0.5, 0.5], [0, 1, 0, 1]))
        assert [p[:2] for p in points] == [(0.0, 0.0), (1.0, 1.0)]
        assert trapezoid_area(points) == pytest.approx(0.5)

    def test_hand_case_area(self):
        points = roc_curve(scored([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]))
        assert trapezoid_area(points) == pytest.approx(0.75)

    def test_monotone_nondecreasing(self):
        rng = np.random.default_rng(2)
        points = roc_curve(scored(rng.random(40).tolist(), ([0, 1] * 20)))
        fprs = [p[0] for p in points]
        tprs = [p[1] for p in points]
        assert fprs == sorted(fprs)
        assert tprs == sorted(tprs)

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            roc_curve(scored([0.5, 0.6], [1, 1]))

    def test_start_sentinel_threshold(self):
        points = roc_curve(scored([0.2, 0.7], [0, 1]))
        assert points[0][2] == math.inf


class TestAuc:
    def test_perfect(self):
        assert auc(scored([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0])) == 1.0

    def test_all_ties(self):
        assert auc(scored([0.5] * 6, [0, 1, 0, 1, 0, 1])) == 0.5

    def test_hand_case(self):
        assert auc(scored([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])) == 0.75

    def test_matches_pair_oracle_with_ties(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(4, 30))
            probs = rng.choice([0.1, 0.3, 0.5, 0.7, 0.9], size=n).tolist()
            labels = rng.integers(0, 2, n).tolist()
            if len(set(labels)) < 2:
                continue
            assert auc(scored(probs, labels)) == pytest.approx(
                auc_by_pairs(probs, labels), abs=1e-12
            )

    def test_rank_equals_trapezoid_on_random_sets(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            n = int(rng.integers(4, 60))
            if rng.random() < 0.5:
                probs = rng.choice(np.linspace(0, 1, 7), size=n).tolist()  # force ties
            else:
                probs = rng.random(n).tolist()
            labels = rng.integers(0, 2, n).tolist()
            if len(set(labels)) < 2:
                continue
            rows = scored(probs, labels)
            assert abs(auc(rows) - trapezoid_area(roc_curve(rows))) < 1e-12

    @settings(deadline=None, max_examples=60)
    @given(
        # 3-decimal grid keeps the transforms strictly increasing in floats
        st.lists(st.floats(0, 1, allow_nan=False).map(lambda x: round(x, 3)), min_size=2, max_size=40),
        st.integers(0, 2**31 - 1),
    )
    def test_monotone_transform_invariance(self, probs, seed):
        rng = np.random.default_rng(seed)
        labels = rng.integers(0, 2, len(probs)).tolist()
        if len(set(labels)) < 2:
            return
        base = auc(scored(probs, labels))
        for transform in (lambda x: math.exp(x), lambda x: x**3 + 2 * x, lambda x: 5 * x - 3):
            mapped = [transform(p) for p in probs]
            assert auc(scored(mapped, labels)) == pytest.approx(base, abs=1e-12)

    def test_label_flip_complement(self):
        rng = np.random.default_rng(5)
        probs = rng.random(30).tolist()
        labels = ([0, 1] * 15)
        flipped = [1 - y for y in labels]
        assert auc(scored(probs, labels)) == pytest.approx(
            1.0 - auc(scored(probs, flipped)), abs=1e-12
        )

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            auc(scored([0.5, 0.6], [0, 0]))


class TestEvaluateScored:
    def test_full_report_fields(self):
        rows = scored([0.9, 0.2, 0.7, 0.4], [1, 0, 1, 0], [0.8, 0.1, 0.9, 0.3])
        rep = evaluate_scored(rows)
        assert rep.auc == 1.0
        assert rep.roc_points is not None
        assert rep.mse_truth_mean is not None
        d = rep.to_dict()
        assert d["confusion"]["tp"] == 2
        assert 0 <= d["mseTruthMean"] <= 1
