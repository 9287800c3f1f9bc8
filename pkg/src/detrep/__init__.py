"""Minimal determinantal representations of plane curves of degree 2 to 5."""

__version__ = "0.1.0"
