"""Copula spectral densities and parametric-bootstrap model diagnostics."""

__version__ = "0.1.0"
