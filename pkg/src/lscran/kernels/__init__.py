"""Pathloss-sum kernels.

The Cython build is used when present; set ``LSCRAN_PURE_PYTHON=1`` to force
the numpy fallback.
"""

import importlib
import os

from . import _pykernels


def load_backend(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("lscran.kernels._ckernels")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    if os.environ.get("LSCRAN_PURE_PYTHON", "") not in ("", "0"):
        return "python", _pykernels
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", _pykernels


BACKEND, _impl = _select()
pathloss_sum = _impl.pathloss_sum
pair_pathloss_sums = _impl.pair_pathloss_sums

__all__ = ["BACKEND", "load_backend", "pathloss_sum", "pair_pathloss_sums"]
