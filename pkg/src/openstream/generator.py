"""Static class geometry: Gaussian clusters centred on hypercube vertices.

Every (concept, known class, sub-cluster) triple and every (unknown class,
sub-cluster) pair owns one cluster. Unknown-class clusters are shared across
concepts, which is what keeps their distribution untouched by drifts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, GeneratorConfig


@dataclass(frozen=True)
class ClusterModel:
    """Sampling recipe of one cluster: rows are vertex + mixing @ z, z ~ N(0, I)."""

    cluster_id: int
    vertex: np.ndarray
    mixing: np.ndarray


def total_clusters(config: GeneratorConfig) -> int:
    """Cluster count the geometry must host.

    n_drifts drifts separate n_drifts + 1 concepts, each needing its own copy
    of every known-class cluster; unknown classes exist once, outside concepts.
    """
    known = (config.n_drifts + 1) * config.n_classes * config.n_clusters_per_class
    return known + config.n_novel * config.n_clusters_per_class


def required_dims(n_total_clusters: int) -> int:
    """Smallest dimensionality d with 2**d distinct hypercube vertices > clusters."""
    if n_total_clusters < 1:
        raise ValueError("cluster count must be positive")
    return int(n_total_clusters).bit_length()


def _distinct_vertices(n: int, d_gen: int, class_sep: float, rng: np.random.Generator) -> np.ndarray:
    """Draw n distinct vertices of {-class_sep, +class_sep}^d_gen uniformly."""
    seen: set[bytes] = set()
    vertices = np.empty((n, d_gen))
    for i in range(n):
        while True:
            bits = rng.integers(0, 2, size=d_gen)
            key = bits.tobytes()
            if key not in seen:
                seen.add(key)
                break
        vertices[i] = (2.0 * bits - 1.0) * class_sep
    return vertices


def projection_matrix(d_gen: int, n_features: int, rng: np.random.Generator) -> np.ndarray:
    """Random projection with i.i.d. N(0, 1/d_gen) entries, preserving
    expected squared norms."""
    return rng.standard_normal((d_gen, n_features)) / np.sqrt(d_gen)


def project(data: np.ndarray, projection: np.ndarray) -> np.ndarray:
    """Map rows of ``data`` through the projection matrix."""
    data = np.asarray(data, dtype=np.float64)
    projection = np.asarray(projection, dtype=np.float64)
    if data.ndim != 2 or projection.ndim != 2:
        raise ValueError("data and projection must be 2-d")
    if data.shape[1] != projection.shape[0]:
        raise ValueError(
            f"cannot project {data.shape[1]} columns through a "
            f"{projection.shape[0]}x{projection.shape[1]} matrix"
        )
    return data @ projection


@dataclass(frozen=True)
class StaticGenerator:
    """Immutable pool of cluster recipes plus the optional output projection.

    Cluster ids are laid out known-classes first, ordered by
    (concept, class, sub_cluster), followed by one block per unknown class.
    """

    clusters: tuple[ClusterModel, ...]
    d_gen: int
    n_features: int
    n_concepts: int
    n_classes: int
    n_clusters_per_class: int
    n_novel: int
    projection: np.ndarray | None = None

    @property
    def n_total(self) -> int:
        return len(self.clusters)

    def kc_cluster_id(self, concept: int, cls: int, sub_cluster: int = 0) -> int:
        if not 0 <= concept < self.n_concepts:
            raise ValueError(f"concept {concept} outside [0, {self.n_concepts})")
        if not 0 <= cls < self.n_classes:
            raise ValueError(f"known class {cls} outside [0, {self.n_classes})")
        return (concept * self.n_classes + cls) * self.n_clusters_per_class + sub_cluster

    def uc_cluster_id(self, uc_index: int, sub_cluster: int = 0) -> int:
        if not 0 <= uc_index < self.n_novel:
            raise ValueError(f"unknown class {uc_index} outside [0, {self.n_novel})")
        offset = self.n_concepts * self.n_classes * self.n_clusters_per_class
        return offset + uc_index * self.n_clusters_per_class + sub_cluster

    def sample_cluster(self, cluster_id: int, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``count`` rows from one cluster, projected to n_features columns."""
        if not 0 <= cluster_id < self.n_total:
            raise ValueError(f"unknown cluster id {cluster_id}")
        cluster = self.clusters[cluster_id]
        z = rng.standard_normal((count, self.d_gen))
        rows = cluster.vertex + z @ cluster.mixing.T
        if self.projection is not None:
            rows = rows @ self.projection
        return rows


def build_static(
    config: GeneratorConfig,
    rng: np.random.Generator,
    projection_rng: np.random.Generator | None = None,
) -> StaticGenerator:
    """Fix the cluster geometry for a configuration.

    When 2**n_informative can host all clusters, data is generated directly in
    n_informative dimensions; extra requested features are filled through a
    random projection. Otherwise the generation dimensionality is corrected
    upward and, if permitted, a random projection maps the data down to the
    requested feature count.
    """
    n_total = total_clusters(config)
    if 2**config.n_informative > n_total:
        d_gen = config.n_informative
        needs_projection = config.n_features > config.n_informative
    elif config.allow_projection:
        d_gen = required_dims(n_total)
        needs_projection = True
    else:
        raise ConfigError(
            f"2**n_informative = {2**config.n_informative} cannot host "
            f"{n_total} distinct clusters and projection is disallowed; "
            "raise n_informative or set allow_projection"
        )

    vertices = _distinct_vertices(n_total, d_gen, config.class_sep, rng)
    mixings = rng.uniform(-1.0, 1.0, size=(n_total, d_gen, d_gen))
    clusters = tuple(
        ClusterModel(cluster_id=i, vertex=vertices[i], mixing=mixings[i])
        for i in range(n_total)
    )

    projection = None
    if needs_projection:
        projection = projection_matrix(d_gen, config.n_features, projection_rng or rng)

    return StaticGenerator(
        clusters=clusters,
        d_gen=d_gen,
        n_features=config.n_features,
        n_concepts=config.n_drifts + 1,
        n_classes=config.n_classes,
        n_clusters_per_class=config.n_clusters_per_class,
        n_novel=config.n_novel,
        projection=projection,
    )
