"""Synthetic non-stationary data streams with concept drift and emerging
unknown classes, plus evaluation tools for unsupervised drift detectors and
an open-set-recognition baseline."""

from .core import (
    Chunk,
    ConfigError,
    GeneratorConfig,
    GroundTruth,
    StreamDataset,
    place_events,
    validate,
)
from .generator import (
    StaticGenerator,
    build_static,
    project,
    required_dims,
    total_clusters,
)
from .metrics import (
    UNKNOWN,
    OSRScores,
    balanced_accuracy,
    confusion_matrix,
    halfpoint_score,
    inner_score,
    outer_score,
    overall_score,
    score_chunk,
)
from .stream import assemble_chunk, generate_stream, kc_allocation

__version__ = "0.1.0"

__all__ = [
    "Chunk",
    "ConfigError",
    "GeneratorConfig",
    "GroundTruth",
    "OSRScores",
    "StaticGenerator",
    "StreamDataset",
    "UNKNOWN",
    "assemble_chunk",
    "balanced_accuracy",
    "build_static",
    "confusion_matrix",
    "generate_stream",
    "halfpoint_score",
    "inner_score",
    "kc_allocation",
    "outer_score",
    "overall_score",
    "place_events",
    "project",
    "required_dims",
    "score_chunk",
    "total_clusters",
    "validate",
]
