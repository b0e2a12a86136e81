"""Refinement monoids, dimension-monoid towers and weak divisibility."""

__version__ = "0.1.0"
