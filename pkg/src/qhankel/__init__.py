"""Exact Hankel determinants of tails of q-series and their cyclotomic structure."""

__version__ = "0.1.0"
