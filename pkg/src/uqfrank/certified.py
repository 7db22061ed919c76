"""Directed-rounding evaluation of real-valued bounds.

Every closed-form bound in the package is evaluated in mpmath's interval
context, so the upper endpoint is a certified upper bound on the exact real
number and the lower endpoint a certified lower bound.
"""
from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import iv, mp

DEFAULT_PRECISION = 256
MAX_REFINE_PRECISION = 8192

_iv_lock = threading.RLock()


@contextmanager
def iv_precision(bits: int):
    """Temporarily set the working precision of the interval context."""
    with _iv_lock:
        old = iv.prec
        iv.prec = bits
        try:
            yield iv
        finally:
            iv.prec = old


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        return Fraction(0)
    val = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -val if sign else val


@dataclass(frozen=True)
class BoundValue:
    """A real number enclosed in ``[lo, hi]``; ``value`` is the upper end.

    Exact integer bounds carry ``lo == hi`` and ``exact=True``.
    """

    lo: Fraction
    hi: Fraction
    precision_bits: int
    exact: bool = False

    @property
    def value(self) -> mpmath.mpf:
        with mp.workprec(max(self.precision_bits, 53) + 64):
            return mpmath.mpf(self.hi.numerator) / self.hi.denominator

    @property
    def upper(self) -> Fraction:
        return self.hi

    @property
    def lower(self) -> Fraction:
        return self.lo

    @classmethod
    def from_interval(cls, x, bits: int) -> "BoundValue":
        a, b = x._mpi_
        lo, hi = _raw_to_fraction(a), _raw_to_fraction(b)
        if not (lo <= hi):
            raise ArithmeticError("interval evaluation produced an empty enclosure")
        return cls(lo, hi, bits)

    @classmethod
    def exact_int(cls, n: int, bits: int = DEFAULT_PRECISION) -> "BoundValue":
        return cls(Fraction(n), Fraction(n), bits, exact=True)

    def __float__(self) -> float:
        # round the upper end upward so float(self) stays an upper bound
        f = float(self.hi)
        return f if Fraction(f) >= self.hi else math.nextafter(f, math.inf)

    def half(self) -> "BoundValue":
        return BoundValue(self.lo / 2, self.hi / 2, self.precision_bits, self.exact)

    def to_json(self) -> dict:
        return {
            "upper": mpmath.nstr(self.value, 30),
            "upper_exact": f"{self.hi.numerator}/{self.hi.denominator}",
            "precision_bits": self.precision_bits,
        }

    def __str__(self) -> str:
        if self.exact:
            return str(self.hi.numerator)
        return mpmath.nstr(self.value, 20)


def certify(expr: Callable, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """Evaluate ``expr(iv)`` at ``bits`` of interval precision."""
    with iv_precision(bits) as ctx:
        return BoundValue.from_interval(expr(ctx), bits)


def strictly_exceeds(make_bound: Callable[[int], BoundValue], u, bits: int = DEFAULT_PRECISION,
                     max_bits: int = MAX_REFINE_PRECISION, ambiguous: bool = True) -> bool:
    """Decide ``bound > u`` by doubling precision until the enclosure settles.

    If the enclosure still straddles ``u`` at ``max_bits`` the ``ambiguous``
    answer is returned; callers pick the conservative side.
    """
    while True:
        b = make_bound(bits)
        if b.lo > u:
            return True
        if b.hi <= u:
            return False
        if b.exact or bits >= max_bits:
            return ambiguous
        bits *= 2


def largest_int_below(make_bound: Callable[[int], BoundValue], bits: int = DEFAULT_PRECISION,
                      max_bits: int = MAX_REFINE_PRECISION) -> int:
    """Largest integer strictly below the bounded real.

    Falls back to the value implied by the upper endpoint, which can only
    overstate the answer.
    """
    while True:
        b = make_bound(bits)
        c_lo, c_hi = math.ceil(b.lo), math.ceil(b.hi)
        if c_lo == c_hi or b.exact or bits >= max_bits:
            return c_hi - 1
        bits *= 2
