"""Extremal constructions, proof-derived finders and exact oracles for uniform hypergraphs."""

from .core import (
    Embedding,
    Hypergraph,
    LevelSetPartition,
    StarShape,
    SunflowerShape,
    build,
    canonical_form,
    codegree,
    expanding_sets,
    level_sets,
    link,
    parse,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "Embedding",
    "Hypergraph",
    "LevelSetPartition",
    "StarShape",
    "SunflowerShape",
    "build",
    "canonical_form",
    "codegree",
    "expanding_sets",
    "level_sets",
    "link",
    "parse",
    "serialize",
    "__version__",
]
