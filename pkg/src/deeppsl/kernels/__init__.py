"""Hot numeric kernels with two interchangeable backends.

The numba backend is used when importable; set ``DEEPPSL_BACKEND=numpy``
to force the pure-numpy path (or ``=numba`` to fail loudly when numba is
missing). ``benchmarks/bench_kernels.py`` compares the two.
"""

import importlib
import os

_VALID = ("auto", "numba", "numpy")


def get_backend(name: str):
    """Import and return a backend module by name ('numpy' or 'numba')."""
    if name not in ("numpy", "numba"):
        raise ValueError(f"unknown kernel backend {name!r}")
    return importlib.import_module(f"{__name__}.{name}_backend")


def _select():
    requested = os.environ.get("DEEPPSL_BACKEND", "auto").strip().lower()
    if requested not in _VALID:
        raise ValueError(
            f"DEEPPSL_BACKEND={requested!r}: expected one of {', '.join(_VALID)}")
    if requested == "numpy":
        return "numpy", get_backend("numpy")
    try:
        return "numba", get_backend("numba")
    except ImportError:
        if requested == "numba":
            raise
        return "numpy", get_backend("numpy")


BACKEND_NAME, _impl = _select()

CONVERGED = _impl.CONVERGED
MAX_ITERS = _impl.MAX_ITERS
NON_FINITE = _impl.NON_FINITE

energy = _impl.energy
soft_energy = _impl.soft_energy
grad_y = _impl.grad_y
grad_x = _impl.grad_x
descend = _impl.descend
