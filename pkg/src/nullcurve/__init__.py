"""Null holomorphic curves in complex Lie groups and the mean curvature of their projections."""
__version__ = "0.1.0"
