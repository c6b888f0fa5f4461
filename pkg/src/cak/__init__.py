"""Exact conformal-algebra toolkit: model arithmetic, embeddings, rewriting."""

__version__ = "0.1.0"
