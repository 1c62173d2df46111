"""Computable cuts, real closures and nonarchimedean fields at stage level."""

from .exactnum import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
