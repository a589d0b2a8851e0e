"""Embeddings of k-dimensional grids into hypercubes."""

from ._gridcube import (
    SearchExhausted,
    SizeError,
    audit,
    audit_file,
    bandwidth,
    build_fx,
    caterpillar,
    designation_matrix,
    embed,
    embedding_file,
    exponents,
    labeling,
    level_budgets,
    s_sequence,
    window_ok,
)

__all__ = [
    "SearchExhausted",
    "SizeError",
    "audit",
    "audit_file",
    "bandwidth",
    "build_fx",
    "caterpillar",
    "designation_matrix",
    "embed",
    "embedding_file",
    "exponents",
    "labeling",
    "level_budgets",
    "s_sequence",
    "window_ok",
]
