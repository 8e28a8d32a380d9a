"""Bounds between f-divergences for distributions in a quasi-epsilon neighborhood."""

__version__ = "0.1.0"
