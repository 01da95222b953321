"""Stream configuration, event ground truth and the chunked data model."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ConfigError(ValueError):
    """A stream configuration violates one or more of its invariants."""


# Sub-seed purposes: every consumer of randomness derives its own generator
# from (master seed, purpose[, index]), so replications are reproducible and
# chunks can be produced independently of each other.
PLACEMENT = 0
GEOMETRY = 1
PROJECTION = 2
SAMPLING = 3
SHUFFLE = 4


def derive_rng(master_seed: int, purpose: int, *key: int) -> np.random.Generator:
    """Return the generator owned by (master_seed, purpose, *key)."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(purpose, *key))
    return np.random.default_rng(seq)


def fresh_seed() -> int:
    """Draw a 64-bit master seed from OS entropy."""
    return int(np.random.SeedSequence().generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class GeneratorConfig:
    """Hyperparameters of the stream generator.

    Stream layout:
        n_chunks: number of batches in the stream.
        chunk_size: samples per batch.

    Events:
        n_drifts: concept drifts within the known classes.
        n_novel: unknown classes emerging during the stream.
        percentage_novel: share of a chunk replaced by each active unknown class.
        even_gt: place events evenly across the stream instead of at random.
        hide_label: unify all unknown-class labels to the single value n_classes.

    Class geometry (propagated to the static sampler):
        n_classes: known classes, labelled 0..n_classes-1.
        weights: known-class proportions; None means equal shares.
        n_clusters_per_class: Gaussian sub-clusters per class.
        class_sep: hypercube side length the cluster centres sit on.
        n_features: output dimensionality.
        n_informative: dimensionality the clusters are generated in.
        allow_projection: permit random feature projections when the requested
            dimensionality cannot host the required number of clusters.

    random_state: 64-bit master seed; None draws one from OS entropy.
    """

    n_chunks: int = 200
    chunk_size: int = 200
    n_drifts: int = 0
    n_novel: int = 0
    percentage_novel: float = 0.1
    even_gt: bool = True
    hide_label: bool = False
    n_classes: int = 2
    weights: tuple[float, ...] | None = None
    n_clusters_per_class: int = 1
    class_sep: float = 1.0
    n_features: int = 10
    n_informative: int = 10
    allow_projection: bool = True
    random_state: int | None = None

    def __post_init__(self) -> None:
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def resolved_weights(self) -> tuple[float, ...]:
        if self.weights is None:
            return (1.0 / self.n_classes,) * self.n_classes
        return self.weights


def validate(config: GeneratorConfig) -> list[str]:
    """Collect every violated configuration invariant; an empty list means ok."""
    errors = []
    if config.n_chunks < 1:
        errors.append("n_chunks must be a positive count")
    if config.chunk_size < 1:
        errors.append("chunk_size must be a positive count")
    if config.n_drifts < 0:
        errors.append("n_drifts must be non-negative")
    if config.n_novel < 0:
        errors.append("n_novel must be non-negative")
    if not 0.0 <= config.percentage_novel < 1.0:
        errors.append("percentage_novel must lie in [0, 1)")
    if config.n_classes < 2:
        errors.append("n_classes must be at least 2")
    if config.weights is not None:
        if len(config.weights) != config.n_classes:
            errors.append("weights must have exactly n_classes entries")
        if any(w <= 0 for w in config.weights):
            errors.append("weights must all be positive")
        if abs(sum(config.weights) - 1.0) > 1e-9:
            errors.append("weights do not sum to 1")
    if config.n_clusters_per_class < 1:
        errors.append("n_clusters_per_class must be at least 1")
    if config.class_sep <= 0:
        errors.append("class_sep must be positive")
    if config.n_features < 1:
        errors.append("n_features must be at least 1")
    if config.n_informative < 1:
        errors.append("n_informative must be at least 1")
    elif config.n_features >= 1 and config.n_informative > config.n_features:
        errors.append("n_informative exceeds n_features")
    if config.n_drifts >= config.n_chunks:
        errors.append("n_drifts must be smaller than n_chunks")
    if config.n_novel >= config.n_chunks:
        errors.append("n_novel must be smaller than n_chunks")
    if config.random_state is not None and not 0 <= config.random_state < 2**64:
        errors.append("random_state must fit in 64 bits")
    return errors


def place_events(
    n_chunks: int,
    n_events: int,
    even: bool = True,
    rng: np.random.Generator | None = None,
) -> list[int]:
    """Pick the chunk indices at which events occur.

    Even placement puts event i at floor(n_chunks * i / (n_events + 1)); random
    placement draws distinct indices uniformly from [1, n_chunks - 1]. Chunk 0
    never hosts an event, so the stream always opens with a clean concept.
    """
    if n_events < 0:
        raise ValueError("n_events must be non-negative")
    if n_events >= n_chunks:
        raise ValueError("n_events must be smaller than n_chunks")
    if even:
        return [n_chunks * i // (n_events + 1) for i in range(1, n_events + 1)]
    if rng is None:
        raise ValueError("random placement requires a generator")
    picks = rng.choice(n_chunks - 1, size=n_events, replace=False) + 1
    return sorted(int(p) for p in picks)


@dataclass(frozen=True)
class GroundTruth:
    """Chunk indices of the concept drifts and of each unknown-class emergence.

    The i-th novelty index is the first chunk containing the unknown class
    labelled n_classes + i. Both lists are placed independently, so a drift
    and a novelty may share a chunk.
    """

    n_chunks: int
    drift_chunks: tuple[int, ...] = ()
    novelty_chunks: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "drift_chunks", tuple(int(i) for i in self.drift_chunks))
        object.__setattr__(self, "novelty_chunks", tuple(int(i) for i in self.novelty_chunks))
        for name in ("drift_chunks", "novelty_chunks"):
            indices = getattr(self, name)
            if any(b <= a for a, b in zip(indices, indices[1:])):
                raise ValueError(f"{name} must be strictly increasing")
            if indices and (indices[0] < 1 or indices[-1] >= self.n_chunks):
                raise ValueError(f"{name} must lie in [1, n_chunks)")

    def _check_index(self, chunk_index: int) -> None:
        if not 0 <= chunk_index < self.n_chunks:
            raise IndexError(f"chunk index {chunk_index} outside [0, {self.n_chunks})")

    def concept_at(self, chunk_index: int) -> int:
        """Concept in effect at a chunk; a drift takes effect at its own chunk."""
        self._check_index(chunk_index)
        return bisect_right(self.drift_chunks, chunk_index)

    def active_unknowns(self, chunk_index: int, n_classes: int) -> list[int]:
        """Labels of the unknown classes that have emerged by this chunk."""
        self._check_index(chunk_index)
        n_active = bisect_right(self.novelty_chunks, chunk_index)
        return [n_classes + i for i in range(n_active)]


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Chunk:
    """One batch of the stream: a feature matrix with integer labels."""

    features: np.ndarray
    labels: np.ndarray
    chunk_index: int

    def __post_init__(self) -> None:
        features = np.ascontiguousarray(self.features, dtype=np.float64)
        labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValueError("features must be a 2-d matrix")
        if labels.shape != (features.shape[0],):
            raise ValueError("labels must have one entry per feature row")
        if not np.isfinite(features).all():
            raise ValueError("features must not contain missing values")
        object.__setattr__(self, "features", _freeze(features))
        object.__setattr__(self, "labels", _freeze(labels))

    def __len__(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True)
class StreamDataset:
    """A generated stream: its configuration, event ground truth and chunks.

    ``config.random_state`` always holds the resolved master seed, so the
    dataset can be regenerated bit-identically from this object alone.
    """

    config: GeneratorConfig
    ground_truth: GroundTruth
    chunks: tuple[Chunk, ...] = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "chunks", tuple(self.chunks))

    def __len__(self) -> int:
        return len(self.chunks)

    def __iter__(self):
        return iter(self.chunks)

    def __getitem__(self, index: int) -> Chunk:
        return self.chunks[index]

    @property
    def n_features(self) -> int:
        return self.config.n_features


def expected_labels(config: GeneratorConfig) -> list[int]:
    """All labels that can appear in a stream generated from this config."""
    known = list(range(config.n_classes))
    if config.hide_label and config.n_novel:
        return known + [config.n_classes]
    return known + [config.n_classes + i for i in range(config.n_novel)]
