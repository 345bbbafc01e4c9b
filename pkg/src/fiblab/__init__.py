"""Realizability, homotopy-type counts and spectral-sequence replay for
S^{2k-1}-fibrations over S^{2k}."""

__version__ = "0.1.0"
