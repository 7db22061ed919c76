"""Backend switch for the hot kernels.

``UQF_BACKEND=numpy`` forces the vectorized numpy implementations;
``UQF_BACKEND=numba`` (the default when numba imports) uses the JIT kernels.
"""
import os

try:
    import numba
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorate(func):
            return func
        return decorate


def backend() -> str:
    """Return the active backend name, re-reading the environment each call."""
    want = os.environ.get("UQF_BACKEND", "").strip().lower()
    if want == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if want in ("", "numba", "auto"):
        return "numba"
    raise ValueError(f"unknown UQF_BACKEND={want!r}; expected 'numba' or 'numpy'")


def use_numba() -> bool:
    return backend() == "numba"
