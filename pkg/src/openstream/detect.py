"""Unsupervised chunk-based drift detectors behind a common step interface.

Each detector consumes one chunk of features per step and answers whether it
signals a change there. Labels are consulted only by the margin-density
detector, and only on its very first chunk; afterwards every detector is
purely unsupervised. After a detection the internal reference is rebuilt from
the current chunk, so at least one quiet step separates two detections.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.svm import LinearSVC

from .core import StreamDataset


@dataclass(frozen=True)
class Detection:
    """One change signal: which detector, at which setting, where."""

    detector: str
    param: float
    seed: int
    chunk: int


@dataclass
class DetectionLog:
    """Detections accumulated over sweep replays."""

    records: list[Detection] = field(default_factory=list)

    def append(self, record: Detection) -> None:
        self.records.append(record)

    def chunks(self, detector: str, param: float, seed: int) -> list[int]:
        return [
            r.chunk
            for r in self.records
            if r.detector == detector and r.param == param and r.seed == seed
        ]

    def __len__(self) -> int:
        return len(self.records)


class DriftDetector:
    """Base step interface; subclasses implement _initialize and _score."""

    kind = ""
    param_name = ""
    param_range = (0.0, 1.0)
    #: True when larger parameter values make the detector more sensitive.
    high_is_sensitive = True

    def __init__(self, param: float, seed: int = 0):
        self.param = float(param)
        self.seed = int(seed)
        self._initialized = False

    @classmethod
    def grid(cls, n: int) -> np.ndarray:
        """n parameter values evenly sampled over the detector's range."""
        low, high = cls.param_range
        return np.linspace(low, high, n)

    @classmethod
    def most_sensitive(cls) -> float:
        low, high = cls.param_range
        return high if cls.high_is_sensitive else low

    def step(self, features: np.ndarray, labels=None) -> bool:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] == 0:
            raise ValueError("a chunk must be a non-empty 2-d matrix")
        if not self._initialized:
            self._initialize(features, labels)
            self._initialized = True
            return False
        return self._score(features)

    def _initialize(self, features: np.ndarray, labels) -> None:
        raise NotImplementedError

    def _score(self, features: np.ndarray) -> bool:
        raise NotImplementedError


class CentroidDistanceDetector(DriftDetector):
    """Signals when the chunk centroid jumps past the largest drift seen so far.

    The distance of each chunk's centroid to the reference centroid (the chunk
    that last reset the detector) is tracked; a detection fires when the
    current distance, scaled by ``percent``, exceeds the running maximum.
    Larger ``percent`` values lower the effective threshold, so they make the
    detector more sensitive.
    """

    kind = "cddd"
    param_name = "percent"
    param_range = (0.6, 0.95)
    high_is_sensitive = True

    def _initialize(self, features, labels=None) -> None:
        self._reset(features.mean(axis=0))

    def _reset(self, centroid: np.ndarray) -> None:
        self._reference = centroid
        self._max_distance: float | None = None

    def _score(self, features) -> bool:
        centroid = features.mean(axis=0)
        distance = float(np.linalg.norm(centroid - self._reference))
        if self._max_distance is not None and distance * self.param > self._max_distance:
            self._reset(centroid)
            return True
        if self._max_distance is None or distance > self._max_distance:
            self._max_distance = distance
        return False


class MarginDensityDetector(DriftDetector):
    """Signals when the share of samples inside a linear margin band shifts.

    A hinge-loss linear classifier is fit on the first, labelled chunk
    (majority class versus the rest). The margin density of a chunk is the
    fraction of rows with |w.x + b| <= 1; a detection fires when it deviates
    from the fitting-chunk baseline by more than ``sigma``. After a detection
    the classifier is refit on the current chunk using its own predictions as
    pseudo-labels. Smaller ``sigma`` values are more sensitive.
    """

    kind = "md3"
    param_name = "sigma"
    param_range = (0.1, 0.45)
    high_is_sensitive = False

    def _initialize(self, features, labels) -> None:
        if labels is None:
            raise ValueError("the margin-density detector needs labels on its first chunk")
        labels = np.asarray(labels)
        values, counts = np.unique(labels, return_counts=True)
        if len(values) < 2:
            raise ValueError("cannot fit a margin on a single-class chunk")
        majority = values[np.argmax(counts)]
        self._fit(features, labels == majority)

    def _fit(self, features, binary_target) -> None:
        clf = LinearSVC(
            C=1.0, loss="hinge", dual=True, max_iter=10_000, random_state=self.seed
        )
        clf.fit(features, binary_target.astype(np.int64))
        self._weights = clf.coef_.ravel()
        self._bias = float(clf.intercept_[0])
        self._baseline = self._margin_density(features)

    def _margin_density(self, features) -> float:
        return float(np.mean(np.abs(features @ self._weights + self._bias) <= 1.0))

    def _score(self, features) -> bool:
        density = self._margin_density(features)
        if abs(density - self._baseline) > self.param:
            pseudo = (features @ self._weights + self._bias) > 0.0
            if pseudo.any() and not pseudo.all():
                self._fit(features, pseudo)
            else:
                # degenerate pseudo-labelling: keep the boundary, rebase only
                self._baseline = density
            return True
        return False


class OneClassDetector(DriftDetector):
    """Signals when the share of samples outside a one-class region explodes.

    The one-class model is a centroid with the 0.95-quantile of training
    distances as its radius. A detection fires when a chunk's outlier rate
    exceeds ``sensitivity`` and twice the fitting-chunk baseline rate; the
    model is refit on the detecting chunk. Smaller ``sensitivity`` values are
    more sensitive.
    """

    kind = "ocdd"
    param_name = "sensitivity"
    param_range = (0.3, 2.5)
    high_is_sensitive = False

    def _initialize(self, features, labels=None) -> None:
        self._fit(features)

    def _fit(self, features) -> None:
        self._centroid = features.mean(axis=0)
        distances = np.linalg.norm(features - self._centroid, axis=1)
        self._radius = float(np.quantile(distances, 0.95))
        self._baseline_rate = float(np.mean(distances > self._radius))

    def _score(self, features) -> bool:
        distances = np.linalg.norm(features - self._centroid, axis=1)
        outlier_rate = float(np.mean(distances > self._radius))
        if outlier_rate > self.param and outlier_rate > 2.0 * self._baseline_rate:
            self._fit(features)
            return True
        return False


DETECTOR_KINDS: dict[str, type[DriftDetector]] = {
    cls.kind: cls
    for cls in (CentroidDistanceDetector, MarginDensityDetector, OneClassDetector)
}


def make_detector(kind: str, param: float, seed: int = 0) -> DriftDetector:
    try:
        cls = DETECTOR_KINDS[kind]
    except KeyError:
        supported = ", ".join(sorted(DETECTOR_KINDS))
        raise ValueError(f"unknown detector {kind!r}; supported kinds: {supported}") from None
    return cls(param, seed=seed)


def replay(stream: StreamDataset, detector: DriftDetector) -> list[int]:
    """Step a detector through a stream, returning its detection chunks."""
    detections = []
    for chunk in stream:
        labels = chunk.labels if chunk.chunk_index == 0 else None
        if detector.step(chunk.features, labels=labels):
            detections.append(chunk.chunk_index)
    return detections


def run_sweep(
    stream: StreamDataset,
    kind: str,
    grid,
    seeds,
    log: DetectionLog | None = None,
) -> DetectionLog:
    """Replay a stream once per (parameter, seed) pair of one detector kind."""
    if len(list(grid)) == 0:
        raise ValueError("parameter grid must not be empty")
    log = log if log is not None else DetectionLog()
    for param in grid:
        for seed in seeds:
            detector = make_detector(kind, float(param), seed=int(seed))
            for chunk_index in replay(stream, detector):
                log.append(Detection(kind, float(param), int(seed), chunk_index))
    return log
