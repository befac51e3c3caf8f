"""Exact lattice operations on order complexes of finite lattices."""

__version__ = "0.1.0"
