"""Similarity-matrix construction methods for normalized spectral clustering."""

__version__ = "0.1.0"
