"""Chunk assembly: weighted known-class sampling, unknown-class replacement,
shuffling and optional label unification."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .core import (
    GEOMETRY,
    PLACEMENT,
    PROJECTION,
    SAMPLING,
    SHUFFLE,
    Chunk,
    ConfigError,
    GeneratorConfig,
    GroundTruth,
    StreamDataset,
    derive_rng,
    fresh_seed,
    place_events,
    validate,
)
from .generator import StaticGenerator, build_static


def round_half_up(x: float) -> int:
    """round() with halves away from zero, for non-negative x."""
    return int(math.floor(x + 0.5))


def kc_allocation(weights, chunk_size: int) -> np.ndarray:
    """Per-class row counts for one chunk.

    Each class gets floor(weight * chunk_size) rows; leftover rows go one by
    one to classes in descending weight order, ties broken by lower index.
    """
    weights = np.asarray(weights, dtype=np.float64)
    counts = np.floor(weights * chunk_size).astype(np.int64)
    order = sorted(range(len(weights)), key=lambda k: (-weights[k], k))
    for i in range(chunk_size - int(counts.sum())):
        counts[order[i % len(order)]] += 1
    return counts


def _draw_from(
    gen: StaticGenerator,
    cluster_ids: list[int],
    count: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Sample rows from one class, picking a sub-cluster per row when several exist."""
    if len(cluster_ids) == 1:
        return gen.sample_cluster(cluster_ids[0], count, rng)
    subs = rng.integers(len(cluster_ids), size=count)
    rows = np.empty((count, gen.n_features))
    for sub, cid in enumerate(cluster_ids):
        mask = subs == sub
        rows[mask] = gen.sample_cluster(cid, int(mask.sum()), rng)
    return rows


def assemble_chunk(
    gen: StaticGenerator,
    ground_truth: GroundTruth,
    config: GeneratorConfig,
    chunk_index: int,
    rng: np.random.Generator,
    shuffle_rng: np.random.Generator | None = None,
    shuffle: bool = True,
) -> Chunk:
    """Build one chunk of the stream.

    Known-class rows are laid down first, per the weight allocation and the
    concept in effect. Each active unknown class then overwrites its share of
    rows at positions drawn over the whole chunk, newest class last, so the
    newest one always holds exactly round(percentage_novel * chunk_size) rows
    while older ones erode slightly. Shuffling uses its own generator so
    disabling it leaves the sampled values unchanged.
    """
    chunk_size = config.chunk_size
    concept = ground_truth.concept_at(chunk_index)
    counts = kc_allocation(config.resolved_weights(), chunk_size)

    features = np.empty((chunk_size, config.n_features))
    labels = np.empty(chunk_size, dtype=np.int64)
    position = 0
    for cls, count in enumerate(counts):
        ids = [gen.kc_cluster_id(concept, cls, s) for s in range(config.n_clusters_per_class)]
        features[position : position + count] = _draw_from(gen, ids, int(count), rng)
        labels[position : position + count] = cls
        position += count

    n_replace = round_half_up(config.percentage_novel * chunk_size)
    for label in ground_truth.active_unknowns(chunk_index, config.n_classes):
        if n_replace == 0:
            break
        uc_index = label - config.n_classes
        ids = [gen.uc_cluster_id(uc_index, s) for s in range(config.n_clusters_per_class)]
        positions = rng.choice(chunk_size, size=n_replace, replace=False)
        features[positions] = _draw_from(gen, ids, n_replace, rng)
        labels[positions] = label

    if shuffle:
        perm = (shuffle_rng if shuffle_rng is not None else rng).permutation(chunk_size)
        features = features[perm]
        labels = labels[perm]

    if config.hide_label:
        labels = np.where(labels >= config.n_classes, config.n_classes, labels)

    return Chunk(features=features, labels=labels, chunk_index=chunk_index)


def generate_stream(config: GeneratorConfig) -> StreamDataset:
    """Generate the full stream described by a configuration.

    The returned dataset carries the resolved master seed in its config, so
    generating again from that config reproduces the stream bit for bit.
    """
    errors = validate(config)
    if errors:
        raise ConfigError("; ".join(errors))

    master = config.random_state if config.random_state is not None else fresh_seed()
    config = replace(config, random_state=master, weights=config.resolved_weights())

    drift_chunks = place_events(
        config.n_chunks, config.n_drifts, config.even_gt, derive_rng(master, PLACEMENT, 0)
    )
    novelty_chunks = place_events(
        config.n_chunks, config.n_novel, config.even_gt, derive_rng(master, PLACEMENT, 1)
    )
    ground_truth = GroundTruth(
        n_chunks=config.n_chunks,
        drift_chunks=tuple(drift_chunks),
        novelty_chunks=tuple(novelty_chunks),
    )

    gen = build_static(config, derive_rng(master, GEOMETRY), derive_rng(master, PROJECTION))

    chunks = tuple(
        assemble_chunk(
            gen,
            ground_truth,
            config,
            t,
            derive_rng(master, SAMPLING, t),
            derive_rng(master, SHUFFLE, t),
        )
        for t in range(config.n_chunks)
    )
    return StreamDataset(config=config, ground_truth=ground_truth, chunks=chunks)
