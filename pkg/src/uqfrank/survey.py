"""Sweeps over D <= X: bounded-digit censuses, the closed-form bounds they
are checked against, and rank lower bounds derived from the largest
odd-indexed digit of xi_D."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Optional, TextIO

import numpy as np

from . import _accel
from .certified import (DEFAULT_PRECISION, BoundValue, certify, largest_int_below,
                        strictly_exceeds)
from .errors import InequalityViolation, InvalidInput
from .kernels import census as _census
from .lattice import bound_B
from .parallel import ordered_map, resolve_threads, split_range
from .surd_cf import expand, is_square, make_xi, max_odd_in

CHUNK = 1 << 15
CSV_HEADER = ["D", "squarefree", "u", "period_length", "rank_lb_classical", "rank_lb_general"]


class CensusKind(str, Enum):
    XI = "xi"
    SQRT_ALL = "sqrt_all"
    HALF_ALL = "half_all"

    @classmethod
    def parse(cls, kind) -> "CensusKind":
        try:
            return cls(kind.value if isinstance(kind, cls) else str(kind))
        except ValueError:
            raise InvalidInput(f"unknown census kind {kind!r}") from None

    @property
    def code(self) -> int:
        return {"xi": _census.KIND_XI, "sqrt_all": _census.KIND_SQRT,
                "half_all": _census.KIND_HALF}[self.value]


def squarefree_sieve(X: int) -> np.ndarray:
    """Boolean array ``s`` of length ``X + 1`` with ``s[D]`` true iff D is squarefree."""
    if X < 1:
        raise InvalidInput("X must be >= 1")
    s = np.ones(X + 1, dtype=bool)
    s[0] = False
    q = 2
    while q * q <= X:
        s[q * q::q * q] = False
        q += 1
    return s


def all_odd_bounded(D: int, B: int) -> bool:
    """Every odd-indexed digit of xi_D is at most B."""
    P, Q, d, status = _census._start(np.int64(D), _census.KIND_XI)
    if status != 0:
        make_xi(D)          # raises for invalid D
        raise InvalidInput(f"D={D} is a perfect square")
    return bool(_census.odd_bounded(np.int64(P), np.int64(Q), np.int64(d), np.int64(B)))


def _chunks(X: int, threads: int):
    return split_range(1, X, max(threads, -(-X // CHUNK)))


def census(X: int, B: int, kind="xi", squarefree_only: bool = False,
           threads: Optional[int] = None) -> int:
    """Number of D in ``[1, X]`` whose sequence value has all odd-indexed digits ``<= B``."""
    kind = CensusKind.parse(kind)
    if X < 1 or B < 1:
        raise InvalidInput("X and B must be >= 1")
    nthreads = resolve_threads(threads)
    sieve = squarefree_sieve(X).astype(np.uint8) if squarefree_only else None
    empty = np.zeros(0, np.uint8)
    fn = _census.census_chunk_numba if _accel.use_numba() else _census.census_chunk_numpy

    def run(lo, hi):
        mask = sieve[lo:hi + 1] if sieve is not None else empty
        return int(fn(np.int64(lo), np.int64(hi), np.int64(B), kind.code, mask,
                       sieve is not None))

    return sum(ordered_map(run, _chunks(X, nthreads), nthreads))


def census_brute(X: int, B: int, kind="xi", squarefree_only: bool = False) -> int:
    """Reference census through the exact surd expansion, one D at a time."""
    from fractions import Fraction
    from math import isqrt

    from .surd_cf import QuadraticSurd, finite_cf, is_squarefree

    kind = CensusKind.parse(kind)
    n = 0
    for D in range(1, X + 1):
        if squarefree_only and not is_squarefree(D):
            continue
        if kind is CensusKind.XI:
            if D % 4 == 0 or is_square(D):
                continue
            x = QuadraticSurd(1, 2, D) if D % 4 == 1 else QuadraticSurd(0, 1, D)
        elif is_square(D):
            r = isqrt(D)
            val = Fraction(r) if kind is CensusKind.SQRT_ALL else Fraction(1 + r, 2)
            digits = finite_cf(val - int(val))[1:]
            n += all(u <= B for u in digits[0::2])
            continue
        elif kind is CensusKind.SQRT_ALL:
            x = QuadraticSurd(0, 1, D)
        else:
            x = QuadraticSurd(1, 2, D)
        n += max_odd_in(expand(x))[0] <= B
    return n


# Reports ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    X: int
    count: int
    bound: BoundValue
    precondition_ok: bool
    B: Optional[int] = None
    R: Optional[int] = None
    m: Optional[int] = None
    label: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.precondition_ok and self.count > self.bound.hi:
            raise InequalityViolation(
                f"{self.label}: count {self.count} exceeds bound {self.bound} at X={self.X}")

    def to_json(self) -> dict:
        out = {"X": self.X}
        if self.B is not None:
            out["B"] = self.B
        if self.R is not None:
            out["R"], out["m"] = self.R, self.m
        out.update({"count": self.count, "bound": self.bound.to_json()["upper"],
                    "bound_precision_bits": self.bound.precision_bits,
                    "precondition_ok": self.precondition_ok})
        out.update(self.extra)
        return out

    def csv_row(self) -> dict:
        row = self.to_json()
        row["precondition_ok"] = str(row["precondition_ok"]).lower()
        return row


def _precondition(lhs, X: int, strict: bool, bits: int,
                  max_bits: int = 8192) -> bool:
    """Certified ``X >= lhs`` (``X > lhs`` when strict); undecided means false."""
    while True:
        v = certify(lhs, bits)
        if v.hi < X or (not strict and v.hi == X):
            return True
        if v.lo > X or (strict and v.lo == X):
            return False
        if bits >= max_bits:
            return False
        bits *= 2


def corollary_bound(X: int, B: int, count: Optional[int] = None, kind="xi",
                    squarefree_only: bool = False, bits: int = DEFAULT_PRECISION,
                    threads: Optional[int] = None) -> BoundReport:
    """``100 B^(3/2) (ln X)^(3/2) X^(7/8)``, valid once ``X >= B^12 (ln X)^4``."""
    if X < 2 or B < 2:
        raise InvalidInput("X and B must be >= 2")
    if count is None:
        count = census(X, B, kind, squarefree_only, threads)
    bound = certify(lambda c: 100 * c.mpf(B) ** 1.5 * c.log(X) ** 1.5 * c.mpf(X) ** c.mpf(0.875), bits)
    ok = _precondition(lambda c: c.mpf(B) ** 12 * c.log(X) ** 4, X, strict=False, bits=bits)
    return BoundReport(X, count, bound, ok, B=B, label="corollary")


def corollary_bound_man(X: int, B: int, count: Optional[int] = None, kind="xi",
                        squarefree_only: bool = False, bits: int = DEFAULT_PRECISION,
                        threads: Optional[int] = None) -> BoundReport:
    """``50 B^(3/2) (ln X)^(3/2) X^(7/8) + 23 B^3 (ln X)^2 X^(3/4)``, valid once
    ``X > B^4 (ln X)^4``."""
    if X < 2 or B < 2:
        raise InvalidInput("X and B must be >= 2")
    if count is None:
        count = census(X, B, kind, squarefree_only, threads)

    def expr(c):
        lx = c.log(X)
        return (50 * c.mpf(B) ** 1.5 * lx ** 1.5 * c.mpf(X) ** c.mpf(0.875)
                + 23 * c.mpf(B) ** 3 * lx ** 2 * c.mpf(X) ** c.mpf(0.75))

    bound = certify(expr, bits)
    ok = _precondition(lambda c: c.mpf(B) ** 4 * c.log(X) ** 4, X, strict=True, bits=bits)
    return BoundReport(X, count, bound, ok, B=B, label="corollary_man")


def thm_bound(kind, X: int, B: int, n: int, L: int,
              bits: int = DEFAULT_PRECISION) -> BoundValue:
    """General count bound for digits ``u_1, u_3, ... <= B`` before ``n`` and
    ``L`` are tuned: ``X [tau^n + 2(n-1)/L] + E(X) * count``, where ``E`` is the
    equidistribution error and ``count`` the declared cover size."""
    from .equidist import SequenceKind, _f_iv, _inv_delta_iv
    from .measure import cover_count_formula, cover_measure_formula

    kind = SequenceKind.parse(kind)
    meas = cover_measure_formula([B] * n, L)
    cnt = cover_count_formula([2 * j - 1 for j in range(1, n + 1)], [B] * n, L)

    def expr(c):
        err = ((3 * c.pi + 1) * c.sqrt(X) * c.sqrt(_f_iv(c, kind, X + 1))
               + c.pi / 2 * _inv_delta_iv(c, kind, X))
        return X * (c.mpf(meas.numerator) / meas.denominator) + err * cnt

    return certify(expr, bits)


# Rank bounds --------------------------------------------------------------------------------

def _b_exceeds(R: int, m: int, u: int) -> bool:
    # ambiguity resolves to "may exceed", which keeps the rank bound a valid lower bound
    return strictly_exceeds(lambda b: bound_B(R, m, b), u, DEFAULT_PRECISION)


@lru_cache(maxsize=1 << 16)
def min_rank_classical(u: int, m: int = 1) -> int:
    """Smallest R with ``B(R, m) > u``; classical universal lattices of smaller
    rank cannot exist once the largest odd digit of xi_D is u."""
    if u < 1 or m < 1:
        raise InvalidInput("u and m must be >= 1")
    hi = 1
    while not _b_exceeds(hi, m, u):
        hi *= 2
    lo = hi // 2 + 1 if hi > 1 else 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _b_exceeds(mid, m, u):
            hi = mid
        else:
            lo = mid + 1
    return lo


def min_rank_general(u: int) -> int:
    return min_rank_classical(u, 2)


def u_and_period(X: int, threads: Optional[int] = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(squarefree, u, period)`` arrays indexed by D in ``[0, X]``; u = 0 where xi_D is
    undefined or D is not squarefree."""
    nthreads = resolve_threads(threads)
    sieve = squarefree_sieve(X)
    mask = sieve.astype(np.uint8)
    fn = _census.u_period_chunk_numba if _accel.use_numba() else _census.u_period_chunk_numpy

    def run(lo, hi):
        return fn(np.int64(lo), np.int64(hi), mask[lo:hi + 1], True)

    res = ordered_map(run, _chunks(X, nthreads), nthreads)
    u = np.concatenate([np.zeros(1, np.int64)] + [r[0] for r in res])
    s = np.concatenate([np.zeros(1, np.int64)] + [r[1] for r in res])
    return sieve, u, s


def exclusion_threshold(R: int, m: int) -> int:
    """Largest integer strictly below ``B(R, m)`` (may overstate when undecidable)."""
    return largest_int_below(lambda b: bound_B(R, m, b))


def exclusion_count(R: int, m: int, X: int, bits: int = DEFAULT_PRECISION,
                    threads: Optional[int] = None) -> BoundReport:
    """Squarefree D <= X with ``u(D) < B(R, m)``: fields where a classical
    rank-R lattice universal for m times the integers is not ruled out."""
    if R < 1 or m < 1 or X < 1:
        raise InvalidInput("R, m and X must be >= 1")
    Bv = bound_B(R, m, bits)
    T = exclusion_threshold(R, m)
    count = census(X, T, "xi", squarefree_only=True, threads=threads) if T >= 1 else 0
    Bhi = Bv.hi

    def expr(c):
        b = c.mpf(Bhi.numerator) / Bhi.denominator
        return 100 * b ** 1.5 * c.mpf(X) ** c.mpf(0.875) * c.log(max(X, 2)) ** 1.5

    bound = certify(expr, bits)
    ok = X >= 2 and _precondition(
        lambda c: (c.mpf(Bhi.numerator) / Bhi.denominator) ** 12 * c.log(X) ** 4,
        X, strict=False, bits=bits)
    return BoundReport(X, count, bound, ok, R=R, m=m, label="exclusion",
                       extra={"threshold": T, "B_Rm": str(Bv)})


# Rank table -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class CensusRecord:
    D: int
    squarefree: bool
    u: int
    period_length: int
    rank_lower_bound_classical: int
    rank_lower_bound_general: int

    def row(self) -> list:
        return [self.D, str(self.squarefree).lower(), self.u, self.period_length,
                self.rank_lower_bound_classical, self.rank_lower_bound_general]


def rank_table(X: int, m: int = 1, threads: Optional[int] = None) -> Iterator[CensusRecord]:
    if X < 2:
        raise InvalidInput("X must be >= 2")
    sieve, u, s = u_and_period(X, threads)
    for D in range(2, X + 1):
        if sieve[D] and u[D] > 0:
            ud = int(u[D])
            yield CensusRecord(D, True, ud, int(s[D]),
                               min_rank_classical(ud, m), min_rank_general(ud))


def write_rank_table(records, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())


def rank_table_csv(X: int, m: int = 1, threads: Optional[int] = None) -> str:
    buf = io.StringIO()
    write_rank_table(rank_table(X, m, threads), buf)
    return buf.getvalue()
