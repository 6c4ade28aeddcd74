"""Exact computations with twist functors on stable module categories."""

__version__ = "0.1.0"
