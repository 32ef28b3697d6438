"""Exact computations for BRST reduction and gluing at the Poisson, coisson and chiral levels."""

__version__ = "0.1.0"
