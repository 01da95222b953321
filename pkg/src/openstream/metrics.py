"""Open-set recognition scores built on balanced accuracy.

All scores return NaN when their sample subset is empty (for example the
outer score before any unknown class has emerged), so that per-chunk curves
never average in sentinel values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Verdict for samples rejected as outside the known classes.
UNKNOWN = -1


@dataclass(frozen=True)
class OSRScores:
    """Per-chunk values of the four scores; NaN marks an undefined value."""

    inner: float
    outer: float
    halfpoint: float
    overall: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.inner, self.outer, self.halfpoint, self.overall)


def balanced_accuracy(y_true, y_pred, labels=None) -> float:
    """Mean per-class recall.

    Classes with no true instances are excluded from the average; with no
    scorable class at all the result is NaN.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred must have the same length")
    present = np.unique(y_true)
    if labels is not None:
        present = [label for label in labels if (y_true == label).any()]
    if len(present) == 0:
        return float("nan")
    recalls = [float(np.mean(y_pred[y_true == label] == label)) for label in present]
    return float(np.mean(recalls))


def outer_score(y_true, y_pred, known_labels) -> float:
    """Balanced accuracy of the binary known-vs-unknown decision.

    Undefined (NaN) when the chunk holds only known or only unknown samples.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    known = np.isin(y_true, list(known_labels))
    if known.all() or not known.any():
        return float("nan")
    true_binary = (~known).astype(np.int64)
    pred_binary = (y_pred == UNKNOWN).astype(np.int64)
    return balanced_accuracy(true_binary, pred_binary)


def inner_score(y_true, y_pred, supports, known_labels) -> float:
    """Closed-set quality over the known classes with forced choice.

    Rows rejected as UNKNOWN are reassigned to the most probable known class
    taken from ``supports``, whose columns follow sorted(known_labels).
    """
    known_labels = np.asarray(sorted(known_labels))
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    supports = np.asarray(supports, dtype=np.float64)
    if supports.shape != (y_true.size, known_labels.size):
        raise ValueError("supports must be one row per sample, one column per known class")
    mask = np.isin(y_true, known_labels)
    if not mask.any():
        return float("nan")
    true_known = y_true[mask]
    pred_known = y_pred[mask].copy()
    rejected = pred_known == UNKNOWN
    if rejected.any():
        forced = np.argmax(supports[mask][rejected], axis=1)
        pred_known[rejected] = known_labels[forced]
    return balanced_accuracy(true_known, pred_known)


def halfpoint_score(y_true, y_pred, known_labels) -> float:
    """Known-class quality where an UNKNOWN verdict counts as a miss."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    mask = np.isin(y_true, list(known_labels))
    if not mask.any():
        return float("nan")
    return balanced_accuracy(y_true[mask], y_pred[mask])


def overall_score(y_true, y_pred, known_labels) -> float:
    """Balanced accuracy over the known classes plus one unified unknown class."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.size == 0:
        return float("nan")
    known_labels = list(known_labels)
    top = max([int(y_true.max()), int(y_pred.max())] + known_labels, default=0)
    unified = top + 1
    true_mapped = np.where(np.isin(y_true, known_labels), y_true, unified)
    pred_mapped = np.where(y_pred == UNKNOWN, unified, y_pred)
    return balanced_accuracy(true_mapped, pred_mapped)


def confusion_matrix(y_true, y_pred, labels) -> np.ndarray:
    """Count matrix with true classes in rows and predictions in columns.

    ``labels`` orders the known classes; everything outside them (including
    the UNKNOWN verdict) lands on the last index of its axis.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    labels = list(labels)
    index = {label: i for i, label in enumerate(labels)}
    last = len(labels)
    matrix = np.zeros((last + 1, last + 1), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        matrix[index.get(int(t), last), index.get(int(p), last)] += 1
    return matrix


def score_chunk(y_true, y_pred, supports, known_labels) -> OSRScores:
    """All four scores of one chunk's predictions."""
    return OSRScores(
        inner=inner_score(y_true, y_pred, supports, known_labels),
        outer=outer_score(y_true, y_pred, known_labels),
        halfpoint=halfpoint_score(y_true, y_pred, known_labels),
        overall=overall_score(y_true, y_pred, known_labels),
    )
