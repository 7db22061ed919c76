"""Throughput comparison of the numba and numpy kernels."""
from __future__ import annotations

import contextlib
import os
import time

from . import _accel

FIELDS = ["backend", "task", "size", "seconds", "rate", "unit"]


@contextlib.contextmanager
def forced_backend(name: str):
    old = os.environ.get("UQF_BACKEND")
    os.environ["UQF_BACKEND"] = name
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("UQF_BACKEND", None)
        else:
            os.environ["UQF_BACKEND"] = old


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def run(census_x: int = 200_000, census_b: int = 3, enum_n: int = 8,
        expsum_x: int = 100_000, expsum_k: int = 20, threads: int = 1) -> list[dict]:
    from .equidist import expsum_moduli
    from .lattice import e8_gram, norm_histogram
    from .survey import census

    backends = ["numba", "numpy"] if _accel.HAVE_NUMBA else ["numpy"]
    E8 = e8_gram()
    rows = []
    for be in backends:
        with forced_backend(be):
            # warm-up compiles the JIT kernels outside the timed region
            census(1000, census_b, threads=1)
            norm_histogram(E8, 2)
            expsum_moduli("sqrt", 10, [1], threads=1)

            _, dt = _timed(lambda: census(census_x, census_b, threads=threads))
            rows.append(dict(backend=be, task=f"census_B{census_b}", size=census_x,
                             seconds=round(dt, 6), rate=round(census_x / dt, 1), unit="D/s"))
            hist, dt = _timed(lambda: norm_histogram(E8, enum_n))
            nvec = sum(hist)
            rows.append(dict(backend=be, task="enumerate_E8", size=enum_n,
                             seconds=round(dt, 6), rate=round(nvec / dt, 1), unit="vectors/s"))
            _, dt = _timed(lambda: expsum_moduli("sqrt", expsum_x, range(1, expsum_k + 1),
                                                 threads=threads))
            terms = expsum_x * expsum_k
            rows.append(dict(backend=be, task="expsum_sqrt", size=terms,
                             seconds=round(dt, 6), rate=round(terms / dt, 1), unit="terms/s"))
    return rows
