"""Dyadic upper bounds for sums of ``1/q_N(k_1..k_N)^2`` over a box.

Each term is replaced by ``ceil(2^shift / q^2)``, so the integer total divided
by ``2^shift`` bounds the exact rational sum from above.
"""
import numpy as np

from .._accel import njit


@njit(cache=True, nogil=True)
def qsum_dyadic_numba(N, K, shift):
    scale = np.int64(1) << shift
    ks = np.ones(N, np.int64)
    total = np.int64(0)
    while True:
        q_prev, q = np.int64(0), np.int64(1)
        for j in range(N):
            q_prev, q = q, ks[j] * q + q_prev
        qq = q * q
        total += (scale + qq - 1) // qq
        j = N - 1
        while j >= 0 and ks[j] == K:
            ks[j] = 1
            j -= 1
        if j < 0:
            break
        ks[j] += 1
    return total


def qsum_dyadic_numpy(N, K, shift):
    scale = np.int64(1) << np.int64(shift)
    # (q_{j-1}, q_j) over every prefix, starting from (q_{-1}, q_0) = (0, 1)
    prev = np.zeros(1, np.int64)
    cur = np.ones(1, np.int64)
    total = 0
    k = np.arange(1, K + 1, dtype=np.int64)
    for _ in range(N - 1):
        prev, cur = np.repeat(cur, K), (np.outer(cur, k) + prev[:, None]).ravel()
    for p0, c0 in zip(np.array_split(prev, max(1, len(prev) // 4096)),
                      np.array_split(cur, max(1, len(cur) // 4096))):
        q = np.outer(c0, k) + p0[:, None]
        qq = q * q
        total += int(((scale + qq - 1) // qq).sum())
    return total
