"""Exact solvers and strategies for total coloring and total marking games."""

__version__ = "0.1.0"
