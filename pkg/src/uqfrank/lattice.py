"""Short-vector counts of positive definite integral lattices and the
closed-form bounds they are compared against."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, isqrt
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from . import _accel
from .certified import DEFAULT_PRECISION, BoundValue, certify
from .errors import DomainError, InvalidInput
from .kernels import enum as _enum

_INT64_SAFE = 1 << 61


def _as_int_matrix(G) -> list[list[int]]:
    rows = [[int(v) for v in row] for row in G]
    r = len(rows)
    if r == 0 or any(len(row) != r for row in rows):
        raise InvalidInput("Gram matrix must be square and nonempty")
    for i in range(r):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise InvalidInput("Gram matrix must be symmetric")
    return rows


def _bareiss(rows: list[list[int]]):
    """Fraction-free elimination without pivoting.

    Returns ``(minors, U)`` where ``minors[k]`` is the k-th leading principal
    minor (``minors[0] = 1``) and row ``k`` of ``U`` is the pivot row at step
    ``k``.  Elimination stops at the first nonpositive pivot.
    """
    r = len(rows)
    M = [row[:] for row in rows]
    minors = [1]
    U = []
    for k in range(r):
        piv = M[k][k]
        U.append([0] * k + M[k][k:])
        minors.append(piv)
        if piv <= 0:
            break
        prev = minors[k]
        for i in range(k + 1, r):
            for j in range(k + 1, r):
                M[i][j] = (piv * M[i][j] - M[i][k] * M[k][j]) // prev
    return minors, U


def is_positive_definite(G) -> bool:
    rows = _as_int_matrix(G)
    minors, _ = _bareiss(rows)
    return len(minors) == len(rows) + 1 and all(m > 0 for m in minors)


def det(G) -> int:
    """Exact determinant of a symmetric integer matrix (Bareiss with pivoting)."""
    M = _as_int_matrix(G) if not isinstance(G, GramMatrix) else [list(r) for r in G.entries]
    r = len(M)
    sign, prev = 1, 1
    for k in range(r - 1):
        if M[k][k] == 0:
            for i in range(k + 1, r):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, r):
            for j in range(k + 1, r):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[r - 1][r - 1]


@dataclass(frozen=True)
class GramMatrix:
    """Gram matrix of a positive definite integral lattice."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = _as_int_matrix(self.entries)
        if not is_positive_definite(rows):
            raise InvalidInput("Gram matrix is not positive definite")
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return det(self.entries)

    def value(self, v: Sequence[int]) -> int:
        return sum(v[i] * self.entries[i][j] * v[j]
                   for i in range(self.r) for j in range(self.r))

    @classmethod
    def identity(cls, r: int) -> "GramMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


GramLike = Union[GramMatrix, Sequence[Sequence[int]]]


def _gram(G: GramLike) -> GramMatrix:
    return G if isinstance(G, GramMatrix) else GramMatrix(G)


def _inverse_diagonal(rows: list[list[int]]) -> list[Fraction]:
    r = len(rows)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(r)]
         for i, row in enumerate(rows)]
    for k in range(r):
        piv = A[k][k]
        A[k] = [v / piv for v in A[k]]
        for i in range(r):
            if i != k and A[i][k]:
                f = A[i][k]
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return [A[i][r + i] for i in range(r)]


def coordinate_bounds(G: GramLike, n: int) -> list[int]:
    """``floor(sqrt(n * (G^-1)_ii))``: no vector of norm <= n leaves this box."""
    g = _gram(G)
    out = []
    for d in _inverse_diagonal([list(r) for r in g.entries]):
        v = n * d
        out.append(isqrt(v.numerator // v.denominator))
    return out


def _fits_int64(minors, U, box, nmax) -> bool:
    r = len(U)
    for k in range(r):
        if nmax * minors[k] * minors[k + 1] >= _INT64_SAFE:
            return False
        if sum(abs(U[k][j]) * box[j] for j in range(k + 1, r)) >= _INT64_SAFE:
            return False
    return True


def norm_histogram(G: GramLike, nmax: int) -> list[int]:
    """``[N(0), N(1), ..., N(nmax)]`` with ``N(n) = #{v : v^T G v = n}``."""
    if nmax < 0:
        raise InvalidInput("nmax must be >= 0")
    g = _gram(G)
    rows = [list(r) for r in g.entries]
    minors, U = _bareiss(rows)
    box = coordinate_bounds(g, nmax)
    if not _fits_int64(minors, U, box, nmax):
        return _enum.norm_counts_python(U, minors, nmax)
    Ua = np.array(U, dtype=np.int64)
    da = np.array(minors, dtype=np.int64)
    if _accel.use_numba():
        counts = _enum.norm_counts_numba(Ua, da, np.int64(nmax))
    else:
        counts = _enum.norm_counts_numpy(Ua, da, nmax)
    return [int(c) for c in counts]


def count_vectors(G: GramLike, n: int) -> int:
    if n < 1:
        raise InvalidInput("n must be >= 1")
    return norm_histogram(G, n)[n]


def brute_force_count(G: GramLike, n: int) -> int:
    """Reference count by scanning the whole coordinate box (small cases only)."""
    import itertools

    g = _gram(G)
    box = coordinate_bounds(g, n)
    ranges = [range(-b, b + 1) for b in box]
    return sum(1 for v in itertools.product(*ranges) if g.value(v) == n)


# Gram files: first line r, then r rows of integers; '#' starts a comment.

def parse_gram(text: str) -> GramMatrix:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise InvalidInput("empty Gram file")
    try:
        r = int(lines[0])
        rows = [[int(tok) for tok in line.split()] for line in lines[1:]]
    except ValueError as exc:
        raise InvalidInput(f"malformed Gram file: {exc}") from None
    if r < 1 or len(rows) != r or any(len(row) != r for row in rows):
        raise InvalidInput(f"Gram file declares rank {r} but holds a different shape")
    return GramMatrix(tuple(tuple(row) for row in rows))


def format_gram(G: GramLike) -> str:
    g = _gram(G)
    return "\n".join([str(g.r)] + [" ".join(map(str, row)) for row in g.entries]) + "\n"


def read_gram(source: Union[str, os.PathLike, TextIO]) -> GramMatrix:
    if hasattr(source, "read"):
        return parse_gram(source.read())
    with open(source, encoding="utf-8") as fh:
        return parse_gram(fh.read())


def write_gram(G: GramLike, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_gram(G))


# Bounds ---------------------------------------------------------------------

def ball_volume_coefficient(m: int) -> tuple[Fraction, int]:
    """Volume of the unit m-ball, ``pi^(m/2) / Gamma(m/2 + 1)``, as ``(c, k)``
    with value ``c * pi^k``.  For odd m the sqrt(pi) from Gamma cancels."""
    if m < 0:
        raise InvalidInput("dimension must be >= 0")
    s = m // 2
    if m % 2 == 0:
        return Fraction(1, factorial(s)), s
    return Fraction(4 ** (s + 1) * factorial(s + 1), factorial(2 * s + 2)), s


def _ball_volume_iv(ctx, m: int):
    c, k = ball_volume_coefficient(m)
    return ctx.mpf(c.numerator) / c.denominator * ctx.pi ** k


def _half_power_iv(ctx, n: int, m: int):
    """``n^(m/2)``."""
    v = ctx.mpf(n) ** (m // 2)
    return v * ctx.sqrt(n) if m % 2 else v


def _check_positive(**kw):
    for name, v in kw.items():
        if int(v) != v or v < 1:
            raise InvalidInput(f"{name} must be a positive integer, got {v}")


@lru_cache(maxsize=4096)
def bound_C(r: int, n: int, detG: int = 1, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """Upper bound for the number of vectors of norm ``n`` in a rank ``r``
    positive definite integral lattice of determinant ``detG``."""
    _check_positive(r=r, n=n, detG=detG)
    if n == 1:
        return BoundValue.exact_int(2 * r, bits)
    if n == 2:
        return BoundValue.exact_int(max(480, 2 * r * (r - 1)), bits)

    def expr(ctx):
        total = _ball_volume_iv(ctx, r) * _half_power_iv(ctx, n, r) / ctx.sqrt(detG)
        for m in range(r):
            total += comb(r, m) * _ball_volume_iv(ctx, m) * _half_power_iv(ctx, n, m)
        return total

    return certify(expr, bits)


@lru_cache(maxsize=4096)
def bound_C_simplified(r: int, n: int, detG: int = 1,
                       bits: int = DEFAULT_PRECISION) -> BoundValue:
    """The cruder closed form valid for ``r >= 3`` and ``n >= 3``."""
    _check_positive(r=r, n=n, detG=detG)
    if r < 3 or n < 3:
        raise DomainError("the simplified bound needs r >= 3 and n >= 3")

    def expr(ctx):
        main = _ball_volume_iv(ctx, r) * _half_power_iv(ctx, n, r) / ctx.sqrt(detG)
        tail = r * _ball_volume_iv(ctx, r - 1)
        tail += ctx.exp(330) * (ctx.mpf(9) / 10) ** r / ctx.sqrt(n)
        return main + tail * _half_power_iv(ctx, n, r - 1)

    return certify(expr, bits)


@lru_cache(maxsize=4096)
def bound_B(R: int, m: int, bits: int = DEFAULT_PRECISION) -> BoundValue:
    """Half of ``bound_C(2R, m)`` at determinant one."""
    _check_positive(R=R, m=m)
    return bound_C(2 * R, m, 1, bits).half()


def e8_gram() -> GramMatrix:
    """Cartan matrix of E8 (Bourbaki labelling)."""
    edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]
    G = [[2 * (i == j) for j in range(8)] for i in range(8)]
    for a, b in edges:
        G[a - 1][b - 1] = G[b - 1][a - 1] = -1
    return GramMatrix(tuple(tuple(row) for row in G))


def gram_from_rows(rows: Iterable[Iterable[int]]) -> GramMatrix:
    return GramMatrix(tuple(tuple(int(v) for v in row) for row in rows))
