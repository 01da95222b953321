import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openstream.metrics import (
    UNKNOWN,
    balanced_accuracy,
    confusion_matrix,
    halfpoint_score,
    inner_score,
    outer_score,
    overall_score,
    score_chunk,
)

# ---------------------------------------------------------------------------
# Independent oracles: plain-Python per-class recall counting, no numpy reuse.
# ---------------------------------------------------------------------------


def oracle_balanced(y_true, y_pred):
    classes = sorted(set(y_true))
    if not classes:
        return math.nan
    recalls = []
    for c in classes:
        total = sum(1 for t in y_true if t == c)
        hit = sum(1 for t, p in zip(y_true, y_pred) if t == c and p == c)
        recalls.append(hit / total)
    return sum(recalls) / len(recalls)


def oracle_outer(y_true, y_pred, known):
    flags = [t in known for t in y_true]
    if all(flags) or not any(flags):
        return math.nan
    t_bin = [0 if f else 1 for f in flags]
    p_bin = [1 if p == UNKNOWN else 0 for p in y_pred]
    return oracle_balanced(t_bin, p_bin)


def oracle_inner(y_true, y_pred, supports, known):
    known = sorted(known)
    rows = [i for i, t in enumerate(y_true) if t in known]
    if not rows:
        return math.nan
    yt, yp = [], []
    for i in rows:
        pred = y_pred[i]
        if pred == UNKNOWN:
            best, best_v = 0, supports[i][0]
            for j in range(1, len(known)):
                if supports[i][j] > best_v:
                    best, best_v = j, supports[i][j]
            pred = known[best]
        yt.append(y_true[i])
        yp.append(pred)
    return oracle_balanced(yt, yp)


def oracle_halfpoint(y_true, y_pred, known):
    rows = [i for i, t in enumerate(y_true) if t in known]
    if not rows:
        return math.nan
    return oracle_balanced([y_true[i] for i in rows], [y_pred[i] for i in rows])


def oracle_overall(y_true, y_pred, known):
    if not y_true:
        return math.nan
    unified = max(list(y_true) + list(y_pred) + list(known)) + 1
    yt = [t if t in known else unified for t in y_true]
    yp = [unified if p == UNKNOWN else p for p in y_pred]
    return oracle_balanced(yt, yp)


def random_case(rng, max_rows=30, max_classes=4):
    n = int(rng.integers(1, max_rows + 1))
    n_classes = int(rng.integers(2, max_classes + 1))
    n_known = int(rng.integers(1, n_classes + 1))
    known = list(range(n_known))
    y_true = rng.integers(0, n_classes, size=n).tolist()
    preds = known + [UNKNOWN]
    y_pred = [preds[i] for i in rng.integers(0, len(preds), size=n)]
    supports = rng.random((n, n_known))
    supports /= supports.sum(axis=1, keepdims=True)
    return y_true, y_pred, supports, known


def assert_same(a, b):
    if math.isnan(b):
        assert math.isnan(a)
    else:
        assert abs(a - b) < 1e-12


class TestBalancedAccuracy:
    def test_perfect(self):
        assert balanced_accuracy([0, 1, 2], [0, 1, 2]) == 1.0

    def test_constant_predictor_binary(self):
        assert balanced_accuracy([0, 0, 1, 1], [0, 0, 0, 0]) == 0.5

    def test_hand_counted_three_class(self):
        # recalls: 1/2, 2/3, 1 -> mean 0.7222...
        value = balanced_accuracy([0, 0, 1, 1, 1, 2], [0, 1, 1, 1, 0, 2])
        assert abs(value - (0.5 + 2 / 3 + 1.0) / 3) < 1e-12

    def test_empty_is_undefined(self):
        assert math.isnan(balanced_accuracy([], []))

    def test_absent_classes_are_dropped(self):
        value = balanced_accuracy([0, 0], [0, 1], labels=[0, 1, 2])
        assert value == 0.5


class TestOuterScore:
    def test_all_rejected_with_both_groups(self):
        y_true = [0, 0, 5, 5]
        y_pred = [UNKNOWN] * 4
        assert outer_score(y_true, y_pred, known_labels=[0, 1]) == 0.5

    def test_perfect_separation(self):
        y_true = [0, 1, 5, 5]
        y_pred = [0, 1, UNKNOWN, UNKNOWN]
        assert outer_score(y_true, y_pred, known_labels=[0, 1]) == 1.0

    def test_hand_counted_mixed(self):
        # 80 known rows, 70 kept; 20 unknown rows, 16 rejected
        y_true = [0] * 80 + [9] * 20
        y_pred = [0] * 70 + [UNKNOWN] * 10 + [UNKNOWN] * 16 + [0] * 4
        value = outer_score(y_true, y_pred, known_labels=[0, 1])
        assert abs(value - 0.8375) < 1e-12

    def test_undefined_without_unknown_rows(self):
        assert math.isnan(outer_score([0, 1], [0, 1], known_labels=[0, 1]))

    def test_undefined_without_known_rows(self):
        assert math.isnan(outer_score([7, 7], [UNKNOWN, 0], known_labels=[0, 1]))


class TestInnerScore:
    def test_equals_balanced_accuracy_without_rejections(self):
        y_true = [0, 0, 1, 1]
        y_pred = [0, 1, 1, 1]
        supports = np.full((4, 2), 0.5)
        expected = balanced_accuracy(y_true, y_pred)
        assert inner_score(y_true, y_pred, supports, [0, 1]) == expected

    def test_forced_choice_rescues_all_rejections(self):
        y_true = [0, 1, 0, 1]
        y_pred = [UNKNOWN] * 4
        supports = np.array([[0.9, 0.1], [0.2, 0.8], [0.6, 0.4], [0.3, 0.7]])
        assert inner_score(y_true, y_pred, supports, [0, 1]) == 1.0

    def test_unknown_true_rows_are_excluded(self):
        y_true = [0, 1, 7]
        y_pred = [0, 1, 0]
        supports = np.full((3, 2), 0.5)
        assert inner_score(y_true, y_pred, supports, [0, 1]) == 1.0


class TestHalfpointScore:
    def test_perfect_known_predictions(self):
        assert halfpoint_score([0, 1], [0, 1], [0, 1]) == 1.0

    def test_total_rejection_is_zero(self):
        assert halfpoint_score([0, 1], [UNKNOWN, UNKNOWN], [0, 1]) == 0.0

    def test_hand_counted(self):
        # class 0: 8/10 correct, 1 UNKNOWN, 1 wrong; class 1: 5/5 correct
        y_true = [0] * 10 + [1] * 5
        y_pred = [0] * 8 + [UNKNOWN, 1] + [1] * 5
        assert abs(halfpoint_score(y_true, y_pred, [0, 1]) - 0.9) < 1e-12


class TestOverallScore:
    def test_perfect_including_unknowns(self):
        y_true = [0, 1, 9, 9]
        y_pred = [0, 1, UNKNOWN, UNKNOWN]
        assert overall_score(y_true, y_pred, [0, 1]) == 1.0

    def test_single_known_class_equals_outer(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            y_true = rng.choice([0, 5], size=n).tolist()
            y_pred = rng.choice([0, UNKNOWN], size=n).tolist()
            o = outer_score(y_true, y_pred, [0])
            v = overall_score(y_true, y_pred, [0])
            assert_same(v, o if not math.isnan(o) else oracle_overall(y_true, y_pred, [0]))

    def test_matches_generic_relabeling_oracle(self):
        rng = np.random.default_rng(11)
        y_true, y_pred, _, known = random_case(rng)
        assert_same(
            overall_score(y_true, y_pred, known), oracle_overall(y_true, y_pred, known)
        )


class TestConfusionMatrix:
    def test_perfect_is_diagonal(self):
        m = confusion_matrix([0, 1, 2], [0, 1, 2], labels=[0, 1, 2])
        np.testing.assert_array_equal(m[:3, :3], np.eye(3, dtype=int))
        assert m[3].sum() == 0

    def test_unknown_lands_on_last_index(self):
        m = confusion_matrix([0], [UNKNOWN], labels=[0, 1])
        assert m[0, 2] == 1
        assert m.sum() == 1

    def test_matches_pair_counting(self):
        rng = np.random.default_rng(3)
        y_true, y_pred, _, known = random_case(rng)
        m = confusion_matrix(y_true, y_pred, labels=known)
        last = len(known)
        for i, row_label in enumerate(known):
            for j, col_label in enumerate(known):
                expected = sum(
                    1 for t, p in zip(y_true, y_pred) if t == row_label and p == col_label
                )
                assert m[i, j] == expected
        assert m.sum() == len(y_true)
        unknown_row = sum(1 for t in y_true if t not in known)
        assert m[last].sum() == unknown_row


class TestAgainstOracles:
    def test_random_cases_match_all_oracles(self):
        rng = np.random.default_rng(2025)
        for _ in range(400):
            y_true, y_pred, supports, known = random_case(rng)
            scores = score_chunk(y_true, y_pred, supports, known)
            assert_same(scores.inner, oracle_inner(y_true, y_pred, supports.tolist(), known))
            assert_same(scores.outer, oracle_outer(y_true, y_pred, known))
            assert_same(scores.halfpoint, oracle_halfpoint(y_true, y_pred, known))
            assert_same(scores.overall, oracle_overall(y_true, y_pred, known))

    def test_halfpoint_never_exceeds_inner(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            y_true, y_pred, supports, known = random_case(rng)
            half = halfpoint_score(y_true, y_pred, known)
            inner = inner_score(y_true, y_pred, supports, known)
            if not math.isnan(half):
                assert half <= inner + 1e-12

    def test_overall_equals_inner_without_unknowns(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            n = int(rng.integers(1, 20))
            known = [0, 1, 2]
            y_true = rng.integers(0, 3, size=n).tolist()
            y_pred = rng.integers(0, 3, size=n).tolist()
            supports = np.full((n, 3), 1 / 3)
            assert_same(
                overall_score(y_true, y_pred, known),
                inner_score(y_true, y_pred, supports, known),
            )


@given(
    data=st.data(),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_scores_are_permutation_invariant_and_bounded(data, seed):
    rng = np.random.default_rng(seed)
    y_true, y_pred, supports, known = random_case(rng)
    scores = score_chunk(y_true, y_pred, supports, known)
    for value in scores.as_tuple():
        assert math.isnan(value) or 0.0 <= value <= 1.0
    perm = data.draw(st.permutations(range(len(y_true))))
    perm = list(perm)
    shuffled = score_chunk(
        [y_true[i] for i in perm],
        [y_pred[i] for i in perm],
        supports[perm],
        known,
    )
    for a, b in zip(scores.as_tuple(), shuffled.as_tuple()):
        assert_same(a, b)
