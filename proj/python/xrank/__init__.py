"""Explainable evaluation of text-to-image retrieval failures."""

from ._xrank import (
    Annotations,
    ColorTable,
    SynsetGraph,
    ToyEmbedder,
    XrankError,
    applicability,
    explain,
    max_weight_matching,
    min_weight_matching,
    mine_rules,
    perturb,
    rank,
    read_embeddings,
    write_embeddings,
)

__version__ = "1.0.0"

__all__ = [
    "Annotations",
    "ColorTable",
    "SynsetGraph",
    "ToyEmbedder",
    "XrankError",
    "applicability",
    "explain",
    "max_weight_matching",
    "min_weight_matching",
    "mine_rules",
    "perturb",
    "rank",
    "read_embeddings",
    "write_embeddings",
]
