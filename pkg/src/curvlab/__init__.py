"""Spectral geometry of algebraic curvature tensors in indefinite signature."""

__version__ = "0.1.0"
