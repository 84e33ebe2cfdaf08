"""Stepwise square integrable decompositions of parabolic nilradicals."""

__version__ = "0.1.0"
