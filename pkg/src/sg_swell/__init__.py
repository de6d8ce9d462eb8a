"""Stochastic Galerkin shallow water solver on Haar wavelet bases."""

__version__ = "0.1.0"
