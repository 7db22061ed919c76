"""Distribution of ``f_D mod 1`` for ``f_D = sqrt(D)`` and ``f_D = (1 + sqrt(D))/2``.

Counts are exact: inside the block of D where ``floor`` of the scaled root
is constant, ``frac(f_D) in [a, b]`` is a pair of rational inequalities on D.
Exponential sums are floating point with an explicit error allowance.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from math import isqrt

import mpmath
import numpy as np

from . import _accel
from .certified import DEFAULT_PRECISION, BoundValue, certify
from .errors import InvalidInput
from .kernels import expsum as _expsum
from .parallel import ordered_map, resolve_threads


class SequenceKind(str, Enum):
    SQRT = "sqrt"
    HALF = "half"

    @classmethod
    def parse(cls, kind) -> "SequenceKind":
        try:
            return cls(kind.value if isinstance(kind, cls) else str(kind))
        except ValueError:
            raise InvalidInput(f"unknown sequence kind {kind!r}") from None


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _blocks(kind: SequenceKind, X: int):
    """Yield ``(base, scale, first, last)`` with
    ``sqrt(D) = base + scale * frac(f_D)`` for every D in ``[first, last]``."""
    if kind is SequenceKind.SQRT:
        m = 1
        while m * m <= X:
            yield m, 1, m * m, min(X, (m + 1) ** 2 - 1)
            m += 1
    else:
        j = 1
        while (2 * j - 1) ** 2 <= X:
            yield 2 * j - 1, 2, (2 * j - 1) ** 2, min(X, (2 * j + 1) ** 2 - 1)
            j += 1


def _count_upto(kind: SequenceKind, X: int, c: Fraction, strict: bool) -> int:
    """``#{1 <= D <= X : frac(f_D) < c}`` (or ``<= c`` when not strict)."""
    if c >= 1:
        return X
    total = 0
    for base, scale, first, last in _blocks(kind, X):
        edge = (base + scale * c) ** 2
        if strict:
            hi = _ceil(edge) - 1
        else:
            hi = _floor(edge)
        total += max(0, min(hi, last) - first + 1)
    return total


def _check_interval(a, b) -> tuple[Fraction, Fraction]:
    a, b = Fraction(a), Fraction(b)
    if not (0 <= a <= b <= 1):
        raise InvalidInput("need 0 <= a <= b <= 1")
    return a, b


def fractional_count(kind, X: int, a, b) -> int:
    """``#{1 <= D <= X : f_D mod 1 in [a, b]}``, exact."""
    kind = SequenceKind.parse(kind)
    if X < 1:
        raise InvalidInput("X must be >= 1")
    a, b = _check_interval(a, b)
    upper = X if b == 1 else _count_upto(kind, X, b, strict=False)
    return upper - _count_upto(kind, X, a, strict=True)


def fractional_count_brute(kind, X: int, a, b) -> int:
    """Per-D reference count (slow)."""
    kind = SequenceKind.parse(kind)
    a, b = _check_interval(a, b)
    n = 0
    for D in range(1, X + 1):
        r = isqrt(D)
        if kind is SequenceKind.SQRT:
            lo_ok = a == 0 or (r + a) ** 2 <= D
            hi_ok = b == 1 or D <= (r + b) ** 2
        else:
            base = r if r % 2 == 1 else r - 1   # largest odd <= sqrt(D)
            lo_ok = a == 0 or (base + 2 * a) ** 2 <= D
            hi_ok = b == 1 or D <= (base + 2 * b) ** 2
        n += lo_ok and hi_ok
    return n


def discrepancy(kind, X: int, a, b) -> Fraction:
    a, b = _check_interval(a, b)
    return fractional_count(kind, X, a, b) - (b - a) * X


# Bounds ----------------------------------------------------------------------------------

def _f_iv(ctx, kind: SequenceKind, D: int):
    r = ctx.sqrt(D)
    return r if kind is SequenceKind.SQRT else (1 + r) / 2


def _inv_delta_iv(ctx, kind: SequenceKind, X: int):
    """``1 / (f_{X+2} - f_{X+1})`` without cancellation."""
    s = ctx.sqrt(X + 2) + ctx.sqrt(X + 1)
    return s if kind is SequenceKind.SQRT else 2 * s


def stepIII_bound(kind, X: int, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """``(3 pi + 1) X^(1/2) f_{X+1}^(1/2) + (pi/2) / (f_{X+2} - f_{X+1})``."""
    kind = SequenceKind.parse(kind)
    if X < 1:
        raise InvalidInput("X must be >= 1")

    def expr(ctx):
        main = (3 * ctx.pi + 1) * ctx.sqrt(X) * ctx.sqrt(_f_iv(ctx, kind, X + 1))
        return main + ctx.pi / 2 * _inv_delta_iv(ctx, kind, X)

    return certify(expr, bits)


def balancing_K(kind, X: int) -> int:
    """``floor(sqrt(X / f_{X+1}))``, at least 1."""
    kind = SequenceKind.parse(kind)
    # k^2 f <= X  <=>  k^4 (X+1) <= X^2 (sqrt)  or  k^4 (X+1) <= (2X - k^2)^2 (half)
    def fits(k):
        if kind is SequenceKind.SQRT:
            return k ** 4 * (X + 1) <= X * X
        return 2 * X >= k * k and k ** 4 * (X + 1) <= (2 * X - k * k) ** 2

    k = max(1, isqrt(isqrt(X)) + 1)
    while k > 0 and not fits(k):
        k -= 1
    while fits(k + 1):
        k += 1
    return max(1, k)


def _expsum_mp(kind: SequenceKind, X: int, k: int, bits: int) -> float:
    with mpmath.mp.workprec(bits):
        acc = mpmath.mpc(0)
        for D in range(1, X + 1):
            f = mpmath.sqrt(D) if kind is SequenceKind.SQRT else (1 + mpmath.sqrt(D)) / 2
            acc += mpmath.expjpi(2 * k * f)
        return float(abs(acc))


def expsum_moduli(kind, X: int, ks, precision: int = 53,
                  threads: int | None = None) -> np.ndarray:
    """``|sum_{D<=X} e(k f_D)|`` for each k, without the error allowance.

    ``precision <= 53`` uses the float64 kernels; anything higher evaluates
    every term in mpmath at that many bits (slow, for spot checks).
    """
    kind = SequenceKind.parse(kind)
    ks = np.asarray(list(ks), dtype=np.int64)
    if X < 1 or (len(ks) and ks.min() < 1):
        raise InvalidInput("X and k must be >= 1")
    if len(ks) and int(ks.max()) ** 2 * X >= 1 << 62:
        raise InvalidInput("k^2 X exceeds the int64 phase reduction")
    half = kind is SequenceKind.HALF
    if precision > 53:
        return np.array([_expsum_mp(kind, X, int(k), precision) for k in ks])
    n = max(1, min(resolve_threads(threads), len(ks)))
    idx = [np.arange(i, len(ks), n) for i in range(n)]
    if _accel.use_numba():
        res = ordered_map(lambda ix: _expsum.expsum_moduli_numba(X, ks[ix], half),
                          [(ix,) for ix in idx], n)
    else:
        res = [_expsum.expsum_moduli_numpy(X, ks[ix], half) for ix in idx]
    out = np.empty(len(ks), np.float64)
    for ix, r in zip(idx, res):
        out[ix] = r
    return out


def expsum_error(X: int) -> float:
    return X * _expsum.ERROR_PER_TERM


def erdos_turan_rhs(kind, X: int, K: int, bits: int = DEFAULT_PRECISION,
                    precision: int = 53, threads: int | None = None) -> BoundValue:
    """``X/(K+1) + 3 sum_{k<=K} |S(k)|/k``; the enclosure absorbs the summation error."""
    kind = SequenceKind.parse(kind)
    if X < 1 or K < 1:
        raise InvalidInput("X and K must be >= 1")
    mods = expsum_moduli(kind, X, range(1, K + 1), precision, threads)
    err = expsum_error(X)

    def expr(ctx):
        total = ctx.mpf(X) / (K + 1)
        acc = ctx.mpf(0)
        for k, m in enumerate(mods, start=1):
            # the true modulus lies within err of the computed one
            acc += (ctx.mpf(float(m)) + ctx.mpf([-err, err])) / k
        return total + 3 * acc

    return certify(expr, bits)


def trig_sum_bound_check(kind, X: int, k: int, precision: int = 53) -> tuple[float, float]:
    """``(|S(k)|/k, pi f_{X+1} + 1/(k^2 pi (f_{X+2} - f_{X+1})))``.

    The left side includes the summation error allowance, the right side is
    rounded down, so ``lhs <= rhs`` is a safe comparison.
    """
    kind = SequenceKind.parse(kind)
    if X < 1 or k < 1:
        raise InvalidInput("X and k must be >= 1")
    m = float(expsum_moduli(kind, X, [k], precision, threads=1)[0])
    lhs = (m + expsum_error(X)) / k
    lhs = math.nextafter(lhs, math.inf)
    rhs_b = certify(lambda ctx: ctx.pi * _f_iv(ctx, kind, X + 1)
                    + _inv_delta_iv(ctx, kind, X) / (k * k * ctx.pi))
    rhs = float(rhs_b.lo)
    if Fraction(rhs) > rhs_b.lo:
        rhs = math.nextafter(rhs, -math.inf)
    return lhs, rhs
