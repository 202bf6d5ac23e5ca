"""Exact Auslander-Reiten computations for quiver representations over prime fields."""

__version__ = "0.1.0"
