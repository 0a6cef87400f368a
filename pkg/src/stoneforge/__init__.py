"""Exact verification toolkit for tree-quotient Boolean algebras, separation
witnesses, eventually periodic set algebras and finitely additive measures."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
