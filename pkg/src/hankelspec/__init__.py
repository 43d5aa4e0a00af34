"""Spectral data and symbols of Hankel operators with finite-spectrum squared modulus."""

__version__ = "0.1.0"
