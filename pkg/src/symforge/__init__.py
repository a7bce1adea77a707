"""Symanzik polynomials of Feynman graphs from spanning forests and Laplacians."""

__version__ = "0.1.0"
