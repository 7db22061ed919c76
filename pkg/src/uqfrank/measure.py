"""Intervals of [0, 1) cut out by prescribed continued-fraction digits.

An interval of rank N is the set of ``x = [0; k_1, ..., k_N, ...]`` with the
first N digits fixed; its endpoints are ``p_N/q_N`` and the mediant
``(p_N + p_{N-1}) / (q_N + q_{N-1})``.  All arithmetic is on exact rationals.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from . import _accel
from .errors import BudgetExceeded, InvalidInput
from .kernels import qsum as _qsum
from .surd_cf import QuadraticSurd

DEFAULT_BUDGET = 10 ** 7
CLOSED = "closed"
HALF_OPEN = "half_open_right"


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    closure: str = CLOSED

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not (0 <= lo <= hi <= 1):
            raise InvalidInput(f"interval [{lo}, {hi}] is not inside [0, 1]")
        if self.closure not in (CLOSED, HALF_OPEN):
            raise InvalidInput(f"unknown closure {self.closure!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        """Membership of a rational or a ``QuadraticSurd``."""
        if isinstance(x, QuadraticSurd):
            if x.compare(self.lo) < 0:
                return False
            c = x.compare(self.hi)
            return c < 0 or (c == 0 and self.closure == CLOSED)
        x = Fraction(x)
        if x < self.lo:
            return False
        return x < self.hi or (x == self.hi and self.closure == CLOSED)

    def issubset(self, other: "RationalInterval") -> bool:
        if self.lo < other.lo or self.hi > other.hi:
            return False
        return not (self.hi == other.hi and self.closure == CLOSED and other.closure == HALF_OPEN)

    def to_json(self) -> dict:
        return {"lo": _frac_str(self.lo), "hi": _frac_str(self.hi), "closure": self.closure}


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _check_digits(ks: Sequence[int]) -> list[int]:
    ks = [int(k) for k in ks]
    if any(k < 1 for k in ks):
        raise InvalidInput("continued-fraction digits must be >= 1")
    return ks


def _last_two(ks: Sequence[int]) -> tuple[int, int, int, int]:
    """``(p_N, q_N, p_{N-1}, q_{N-1})`` for ``[0; ks]``; rank 0 gives ``(0, 1, 1, 0)``."""
    p, q, pp, qq = 0, 1, 1, 0
    for k in ks:
        p, q, pp, qq = k * p + pp, k * q + qq, p, q
    return p, q, pp, qq


def _ordered(a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    return (a, b) if a <= b else (b, a)


def rank_interval(ks: Sequence[int]) -> RationalInterval:
    ks = _check_digits(ks)
    if not ks:
        raise InvalidInput("rank intervals need at least one digit")
    p, q, pp, qq = _last_two(ks)
    lo, hi = _ordered(Fraction(p, q), Fraction(p + pp, q + qq))
    return RationalInterval(lo, hi, HALF_OPEN)


def tail_union_measure(ks: Sequence[int], N: int) -> Fraction:
    """Measure of the part of ``rank_interval(ks)`` whose next digit exceeds ``N``."""
    ks = _check_digits(ks)
    if N < 0:
        raise InvalidInput("N must be >= 0")
    _, q, _, qq = _last_two(ks)
    # between p/q (digit -> infinity) and [0; ks, N+1]
    return Fraction(1, q * ((N + 1) * q + qq))


def cover_interval_I(ks: Sequence[int], L: int) -> RationalInterval:
    """Closed interval holding every rank interval ``ks + [k]`` with ``k > L``."""
    ks = _check_digits(ks)
    if not ks:
        raise InvalidInput("need at least one digit")
    if L < 1:
        raise InvalidInput("L must be >= 1")
    p, q, pp, qq = _last_two(ks)
    lo, hi = _ordered(Fraction((L + 1) * p + pp, (L + 1) * q + qq), Fraction(p, q))
    return RationalInterval(lo, hi, CLOSED)


def merge_closed(intervals: Sequence[RationalInterval]) -> list[RationalInterval]:
    """Union of closed intervals as a sorted list of disjoint closed intervals."""
    out: list[list[Fraction]] = []
    for iv in sorted(intervals, key=lambda t: (t.lo, t.hi)):
        if out and iv.lo <= out[-1][1]:
            if iv.hi > out[-1][1]:
                out[-1][1] = iv.hi
        else:
            out.append([iv.lo, iv.hi])
    return [RationalInterval(a, b, CLOSED) for a, b in out]


# General (a_j, phi(a_j)) bookkeeping ---------------------------------------------

def cover_count_formula(a: Sequence[int], phi_a: Sequence[int], L: int) -> int:
    """Declared interval count for a cover built from ``n = len(a)`` levels."""
    n = len(a)
    if n != len(phi_a) or n < 1:
        raise InvalidInput("a and phi_a must be nonempty and of equal length")
    head = sum((n - j) * phi_a[j] for j in range(n))
    return head + (sum(a) - n * (n + 1) // 2) * L


def cover_measure_formula(phi_a: Sequence[int], L: int,
                          slack: Fraction = Fraction(2)) -> Fraction:
    """``prod (1 - 1/(3(phi(a_j)+2))) + slack*(n-1)/L``; pass ``Fraction(5, 3)``
    for the sharper slack constant."""
    n = len(phi_a)
    if n < 1:
        raise InvalidInput("need at least one level")
    tau = prod((1 - Fraction(1, 3 * (f + 2)) for f in phi_a), start=Fraction(1))
    return tau + slack * (n - 1) / L


@dataclass(frozen=True)
class CoverSpec:
    intervals: tuple[RationalInterval, ...]
    params: tuple[int, int, int]
    declared_count_bound: int
    declared_measure_bound: Fraction
    raw_count: int = field(default=0, compare=False)

    @property
    def count(self) -> int:
        return len(self.intervals)

    @property
    def measure(self) -> Fraction:
        return sum((iv.length for iv in self.intervals), Fraction(0))

    def to_json(self) -> dict:
        B, n, L = self.params
        return {
            "params": {"B": B, "n": n, "L": L},
            "declared_count_bound": self.declared_count_bound,
            "declared_measure_bound": _frac_str(self.declared_measure_bound),
            "count": self.count,
            "raw_count": self.raw_count,
            "measure": _frac_str(self.measure),
            "intervals": [{"lo": _frac_str(iv.lo), "hi": _frac_str(iv.hi)} for iv in self.intervals],
        }


def cover_size(B: int, n: int, L: int) -> int:
    """Number of intervals generated before merging."""
    return B ** n * L ** (n - 1) + sum(B ** N * L ** (N - 1) for N in range(1, n))


def _digit_ranges(depth: int, B: int, L: int):
    # odd positions (1-based) carry the bounded digits
    return [range(1, (B if j % 2 == 0 else L) + 1) for j in range(depth)]


def build_cover(B: int, n: int, L: int, budget: int = DEFAULT_BUDGET) -> CoverSpec:
    """Finite union of closed intervals containing every ``x`` in [0, 1) whose
    odd-indexed digits ``u_1, u_3, ..., u_{2n-1}`` are all ``<= B``."""
    for name, v in (("B", B), ("n", n), ("L", L)):
        if int(v) != v or v < 1:
            raise InvalidInput(f"{name} must be a positive integer")
    raw = cover_size(B, n, L)
    if raw > budget:
        raise BudgetExceeded(f"cover would hold {raw} intervals, budget is {budget}")
    pieces = []
    for ks in itertools.product(*_digit_ranges(2 * n - 1, B, L)):
        r = rank_interval(ks)
        pieces.append(RationalInterval(r.lo, r.hi, CLOSED))
    for N in range(1, n):
        for ks in itertools.product(*_digit_ranges(2 * N - 1, B, L)):
            pieces.append(cover_interval_I(ks, L))
    a = [2 * j - 1 for j in range(1, n + 1)]
    return CoverSpec(
        intervals=tuple(merge_closed(pieces)),
        params=(B, n, L),
        declared_count_bound=cover_count_formula(a, [B] * n, L),
        declared_measure_bound=cover_measure_formula([B] * n, L),
        raw_count=len(pieces),
    )


def cover_contains(cover: CoverSpec, x: QuadraticSurd) -> bool:
    if x.compare(0) < 0 or x.compare(1) >= 0:
        raise InvalidInput("x must lie in [0, 1); take the fractional part first")
    ivs = cover.intervals
    lo, hi = 0, len(ivs)
    # last interval with lo <= x
    while lo < hi:
        mid = (lo + hi) // 2
        if x.compare(ivs[mid].lo) >= 0:
            lo = mid + 1
        else:
            hi = mid
    return lo > 0 and ivs[lo - 1].contains(x)


# Sums of 1/q_N^2 -------------------------------------------------------------------

def _check_qsum_args(N: int, K: int):
    if N < 1 or K < 1:
        raise InvalidInput("N and K must be >= 1")


def qsum_truncated(N: int, K: int, budget: int = 10 ** 6) -> Fraction:
    """Exact ``sum 1/q_N(k)^2`` over ``1 <= k_1..k_N <= K``."""
    _check_qsum_args(N, K)
    if K ** N > budget:
        raise BudgetExceeded(f"{K}^{N} terms exceed the exact-summation budget {budget}")
    # group equal denominators so the rational sum stays cheap
    counts: dict[int, int] = {}
    for ks in itertools.product(range(1, K + 1), repeat=N):
        q = _last_two(ks)[1]
        counts[q] = counts.get(q, 0) + 1
    return sum((Fraction(c, q * q) for q, c in counts.items()), Fraction(0))


QSUM_SHIFT = 52


def qsum_upper_bound(N: int, K: int, budget: int = 10 ** 10) -> Fraction:
    """Rational upper bound ``sum ceil(2^52/q^2) / 2^52`` on ``qsum_truncated(N, K)``."""
    _check_qsum_args(N, K)
    if K ** N > budget:
        raise BudgetExceeded(f"{K}^{N} terms exceed the budget {budget}")
    if (K + 1) ** N >= 1 << 31:
        raise BudgetExceeded("denominators would overflow the int64 kernels")
    if _accel.use_numba():
        total = int(_qsum.qsum_dyadic_numba(N, K, QSUM_SHIFT))
    elif K ** (N - 1) <= 10 ** 7:
        total = _qsum.qsum_dyadic_numpy(N, K, QSUM_SHIFT)
    else:
        raise BudgetExceeded("prefix table too large for the numpy kernel")
    return Fraction(total, 1 << QSUM_SHIFT)
