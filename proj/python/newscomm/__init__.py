"""Predict which news community an article belongs to from its content."""

from ._core import (  # noqa: F401
    DataError,
    Error,
    UsageError,
    auc,
    auc_band,
    cli,
    count_syllables,
    entities,
    feature_names,
    group_spans,
    ingest,
    pairwise,
    roc_curve,
    synth,
    text_features,
    tokenize,
)

__all__ = [
    "DataError",
    "Error",
    "UsageError",
    "auc",
    "auc_band",
    "cli",
    "count_syllables",
    "entities",
    "feature_names",
    "group_spans",
    "ingest",
    "pairwise",
    "roc_curve",
    "synth",
    "text_features",
    "tokenize",
]
