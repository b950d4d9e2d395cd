"""Exact toolkit for Q-homology planes built from line and conic arrangements."""

__version__ = "0.1.0"
