"""Deterministic chunked thread pool used by the sweeps."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar

T = TypeVar("T")


def resolve_threads(threads: Optional[int] = None) -> int:
    """``UQF_THREADS`` wins over the argument; 0 or None means all CPUs."""
    env = os.environ.get("UQF_THREADS", "").strip()
    if env:
        threads = int(env)
    if not threads:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi]`` into at most ``parts`` contiguous inclusive chunks."""
    n = hi - lo + 1
    if n <= 0:
        return []
    parts = max(1, min(parts, n))
    step, extra = divmod(n, parts)
    out, start = [], lo
    for i in range(parts):
        end = start + step + (i < extra) - 1
        out.append((start, end))
        start = end + 1
    return out


def ordered_map(fn: Callable[..., T], chunks: Sequence, threads: int) -> list[T]:
    """``[fn(*c) for c in chunks]``, possibly concurrent, results in chunk order."""
    if threads <= 1 or len(chunks) <= 1:
        return [fn(*c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))
