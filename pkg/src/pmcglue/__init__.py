"""Glued sphere-train surfaces with prescribed mean curvature."""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
