"""Hot loops of the kernel word problem.

The compiled extension is used when it imports; ``STONEFORGE_PURE_PYTHON=1``
forces the pure-Python twin. ``BACKEND`` names the active one.
"""

import importlib
import os

_FUNCTIONS = ("conjunct_nonzero", "first_model", "decide_all_conjuncts",
              "oracle_all_conjuncts")


def load_backend(name):
    """Return the kernel module called ``name`` ("compiled" or "python")."""
    if name == "compiled":
        return importlib.import_module("stoneforge._kernels._ckernels")
    if name == "python":
        return importlib.import_module("stoneforge._kernels._pykernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        load_backend("compiled")
    except ImportError:
        pass
    else:
        names.insert(0, "compiled")
    return names


if os.environ.get("STONEFORGE_PURE_PYTHON"):
    _impl = load_backend("python")
    BACKEND = "python"
else:
    try:
        _impl = load_backend("compiled")
        BACKEND = "compiled"
    except ImportError:
        _impl = load_backend("python")
        BACKEND = "python"

conjunct_nonzero = _impl.conjunct_nonzero
first_model = _impl.first_model
decide_all_conjuncts = _impl.decide_all_conjuncts
oracle_all_conjuncts = _impl.oracle_all_conjuncts

__all__ = ["BACKEND", "available_backends", "load_backend", *_FUNCTIONS]
