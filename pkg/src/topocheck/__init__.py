"""Type inference and a reference interpreter for transformation languages
over topological collections (seq, set, bag, grid)."""

__version__ = "0.1.0"
