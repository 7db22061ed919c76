"""Continued-fraction sweeps over ranges of D.

Every surd handled here has the form ``(P + sqrt(d)) / Q`` with ``Q | d - P^2``
and its first complete quotient purely periodic, so after consuming ``u_0``
the PQa state returns to itself after one period.  Scanning two periods
covers every odd index whatever the parity of the period length.

Kinds: 0 = xi_D (D not 0 mod 4, D nonsquare), 1 = sqrt(D) for every D,
2 = (1 + sqrt(D))/2 for every D.  Perfect squares in kinds 1 and 2 have a
finite expansion; they are resolved up front.
"""
import math

import numpy as np

from .._accel import njit

KIND_XI, KIND_SQRT, KIND_HALF = 0, 1, 2


@njit(cache=True, nogil=True)
def _isqrt(n):
    s = np.int64(math.sqrt(float(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


@njit(cache=True, nogil=True)
def _floor_q(P, Q, s):
    if Q > 0:
        return (P + s) // Q
    return (P + s + 1) // Q


@njit(cache=True, nogil=True)
def odd_bounded(P, Q, d, B):
    s = _isqrt(d)
    a = _floor_q(P, Q, s)
    P = a * Q - P
    Q = (d - P * P) // Q
    P1, Q1 = P, Q
    j = 1
    passes = 0
    while True:
        a = _floor_q(P, Q, s)
        if (j & 1) == 1 and a > B:
            return False
        P = a * Q - P
        Q = (d - P * P) // Q
        j += 1
        if P == P1 and Q == Q1:
            passes += 1
            if passes == 2:
                return True


@njit(cache=True, nogil=True)
def max_odd_and_period(P, Q, d):
    s = _isqrt(d)
    a = _floor_q(P, Q, s)
    P = a * Q - P
    Q = (d - P * P) // Q
    P1, Q1 = P, Q
    j = 1
    passes = 0
    best = np.int64(0)
    period = np.int64(0)
    while True:
        a = _floor_q(P, Q, s)
        if (j & 1) == 1 and a > best:
            best = a
        P = a * Q - P
        Q = (d - P * P) // Q
        if P == P1 and Q == Q1:
            passes += 1
            if passes == 1:
                period = j
            else:
                return best, period
        j += 1


@njit(cache=True, nogil=True)
def _start(D, kind):
    """(P, Q, d, status): status 0 = scan, 1 = skip, 2 = square."""
    r = _isqrt(D)
    square = r * r == D
    if kind == KIND_XI:
        if D % 4 == 0 or square:
            return 0, 1, D, 1
        if D % 4 == 1:
            return 1, 2, D, 0
        return 0, 1, D, 0
    if square:
        return 0, 1, D, 2
    if kind == KIND_SQRT:
        return 0, 1, D, 0
    if D % 2 == 1:
        return 1, 2, D, 0
    return 2, 4, 4 * D, 0


@njit(cache=True, nogil=True)
def _square_ok(D, kind, B):
    if kind == KIND_SQRT:
        return True          # fractional part 0: no digits at all
    r = _isqrt(D)
    return r % 2 == 1 or B >= 2   # 0, or 1/2 = [0; 2]


@njit(cache=True, nogil=True)
def census_chunk_numba(lo, hi, B, kind, mask, use_mask):
    count = np.int64(0)
    for D in range(lo, hi + 1):
        if use_mask and mask[D - lo] == 0:
            continue
        P, Q, d, status = _start(D, kind)
        if status == 1:
            continue
        if status == 2:
            if _square_ok(D, kind, B):
                count += 1
            continue
        if odd_bounded(P, Q, d, B):
            count += 1
    return count


@njit(cache=True, nogil=True)
def u_period_chunk_numba(lo, hi, mask, use_mask):
    """``(u, period)`` of xi_D for D in ``[lo, hi]``; zeros where skipped."""
    n = hi - lo + 1
    us = np.zeros(n, np.int64)
    ss = np.zeros(n, np.int64)
    for D in range(lo, hi + 1):
        if use_mask and mask[D - lo] == 0:
            continue
        P, Q, d, status = _start(D, KIND_XI)
        if status != 0:
            continue
        u, s = max_odd_and_period(P, Q, d)
        us[D - lo] = u
        ss[D - lo] = s
    return us, ss


# numpy lockstep versions ---------------------------------------------------------------

def _isqrt_np(n):
    s = np.floor(np.sqrt(n.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > n, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= n, s + 1, s)
    return s


def _floor_q_np(P, Q, s):
    return np.where(Q > 0, (P + s) // Q, (P + s + 1) // Q)


def _start_np(D, kind, B):
    """Returns ``(P, Q, d, scan_mask, square_hits)``."""
    r = _isqrt_np(D)
    square = r * r == D
    if kind == KIND_XI:
        scan = (D % 4 != 0) & ~square
        one = D % 4 == 1
        P, Q, d = np.where(one, 1, 0), np.where(one, 2, 1), D.copy()
        hits = np.zeros_like(square)
    elif kind == KIND_SQRT:
        scan = ~square
        P, Q, d = np.zeros_like(D), np.ones_like(D), D.copy()
        hits = square
    else:
        scan = ~square
        odd = D % 2 == 1
        P, Q, d = np.where(odd, 1, 2), np.where(odd, 2, 4), np.where(odd, D, 4 * D)
        hits = square & ((r % 2 == 1) | (B >= 2))
    return P.astype(np.int64), Q.astype(np.int64), d.astype(np.int64), scan, hits


def census_chunk_numpy(lo, hi, B, kind, mask, use_mask):
    D = np.arange(lo, hi + 1, dtype=np.int64)
    keep = mask.astype(bool) if use_mask else np.ones(len(D), bool)
    P, Q, d, scan, hits = _start_np(D, kind, B)
    count = int((hits & keep).sum())
    sel = scan & keep
    P, Q, d = P[sel], Q[sel], d[sel]
    s = _isqrt_np(d)
    a = _floor_q_np(P, Q, s)
    P = a * Q - P
    Q = (d - P * P) // Q
    P1, Q1 = P.copy(), Q.copy()
    passes = np.zeros(len(P), np.int64)
    j = 1
    while len(P):
        a = _floor_q_np(P, Q, s)
        alive = a <= B if j % 2 == 1 else np.ones(len(P), bool)
        P = a * Q - P
        Q = (d - P * P) // Q
        passes += (P == P1) & (Q == Q1)
        done = alive & (passes == 2)
        count += int(done.sum())
        alive &= ~done
        P, Q, d, s, P1, Q1, passes = (x[alive] for x in (P, Q, d, s, P1, Q1, passes))
        j += 1
    return count


def u_period_chunk_numpy(lo, hi, mask, use_mask):
    D = np.arange(lo, hi + 1, dtype=np.int64)
    keep = mask.astype(bool) if use_mask else np.ones(len(D), bool)
    P, Q, d, scan, _ = _start_np(D, KIND_XI, 0)
    idx = np.nonzero(scan & keep)[0]
    us = np.zeros(len(D), np.int64)
    ss = np.zeros(len(D), np.int64)
    P, Q, d = P[idx], Q[idx], d[idx]
    s = _isqrt_np(d)
    a = _floor_q_np(P, Q, s)
    P = a * Q - P
    Q = (d - P * P) // Q
    P1, Q1 = P.copy(), Q.copy()
    passes = np.zeros(len(P), np.int64)
    best = np.zeros(len(P), np.int64)
    j = 1
    while len(P):
        a = _floor_q_np(P, Q, s)
        if j % 2 == 1:
            best = np.maximum(best, a)
        P = a * Q - P
        Q = (d - P * P) // Q
        back = (P == P1) & (Q == Q1)
        first = back & (passes == 0)
        ss[idx[first]] = j
        passes += back
        done = passes == 2
        us[idx[done]] = best[done]
        live = ~done
        P, Q, d, s, P1, Q1, passes, best, idx = (
            x[live] for x in (P, Q, d, s, P1, Q1, passes, best, idx))
        j += 1
    return us, ss
