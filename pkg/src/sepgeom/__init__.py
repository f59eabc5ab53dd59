"""Numerical geometry of two- and three-qubit separable states."""

__version__ = "0.1.0"
