"""Exact arithmetic in Q(sqrt D) in the basis (1, xi_D).

Elements are ``a + b*xi`` with rational ``a, b``.  Besides the field
operations this module builds the objects behind the rank argument: the
elements ``alpha_i = p_i - q_i * xi'`` attached to the convergents of xi,
the semiconvergents ``alpha_{2i-1} + r*alpha_{2i}``, the codifferent element
``delta`` that makes their traces equal to one, and the trace form that turns
an O_H-lattice into a Z-lattice of twice the rank.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .errors import InternalConventionError, InvalidInput, SearchExhausted
from .surd_cf import PeriodicCF, coefficient_at, expand, make_xi, sign_of


@dataclass(frozen=True)
class FieldContext:
    D: int

    def __post_init__(self):
        make_xi(self.D)  # validates D

    @property
    def xi_case(self) -> str:
        return "half" if self.D % 4 == 1 else "sqrt"

    @cached_property
    def cf(self) -> PeriodicCF:
        return expand(make_xi(self.D))

    @cached_property
    def _conv(self) -> list[tuple[int, int]]:
        # index 0 holds (p_{-1}, q_{-1})
        return [(1, 0)]

    def convergent(self, i: int) -> tuple[int, int]:
        """``(p_i, q_i)`` for ``i >= -1``."""
        conv = self._conv
        while len(conv) <= i + 1:
            j = len(conv) - 1
            p1, q1 = conv[-1]
            p2, q2 = conv[-2] if len(conv) >= 2 else (0, 1)
            u = coefficient_at(self.cf, j)
            conv.append((u * p1 + p2, u * q1 + q2))
        return conv[i + 1]

    def element(self, a, b=0) -> "FieldElement":
        return FieldElement(Fraction(a), Fraction(b), self)

    @property
    def xi(self) -> "FieldElement":
        return self.element(0, 1)

    @property
    def sqrtD(self) -> "FieldElement":
        if self.xi_case == "sqrt":
            return self.element(0, 1)
        return self.element(-1, 2)

    @property
    def codifferent_denominator(self) -> "FieldElement":
        """``c`` with codifferent ``= (1/c) O_H``: 2*sqrt(D) or sqrt(D)."""
        r = self.sqrtD
        return r * 2 if self.xi_case == "sqrt" else r


@dataclass(frozen=True)
class FieldElement:
    a: Fraction
    b: Fraction
    ctx: FieldContext

    def _wrap(self, a, b) -> "FieldElement":
        return FieldElement(Fraction(a), Fraction(b), self.ctx)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.ctx.D != self.ctx.D:
                raise InvalidInput("elements live in different fields")
            return other
        return self._wrap(other, 0)

    def __add__(self, other):
        o = self._coerce(other)
        return self._wrap(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        a, b, c, d = self.a, self.b, o.a, o.b
        D = self.ctx.D
        if self.ctx.xi_case == "sqrt":
            return self._wrap(a * c + b * d * D, a * d + b * c)
        # xi^2 = xi + (D-1)/4
        k = Fraction(D - 1, 4)
        return self._wrap(a * c + b * d * k, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "FieldElement":
        if self.ctx.xi_case == "sqrt":
            return self._wrap(self.a, -self.b)
        return self._wrap(self.a + self.b, -self.b)

    def __truediv__(self, other):
        o = self._coerce(other)
        n = norm(o)
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        num = self * o.conjugate()
        return self._wrap(num.a / n, num.b / n)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx.D == other.ctx.D and self.a == other.a and self.b == other.b
        try:
            o = Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.b == 0 and self.a == o

    def __hash__(self):
        return hash((self.a, self.b, self.ctx.D))

    def rational_sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """``(A, B)`` with ``self = A + B*sqrt(D)``."""
        if self.ctx.xi_case == "sqrt":
            return self.a, self.b
        return self.a + self.b / 2, self.b / 2

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def __float__(self) -> float:
        A, B = self.rational_sqrt_coords()
        return float(A) + float(B) * self.ctx.D ** 0.5

    def __repr__(self) -> str:
        return f"({self.a} + {self.b}*xi_{self.ctx.D})"


def trace(x: FieldElement) -> Fraction:
    if x.ctx.xi_case == "sqrt":
        return 2 * x.a
    return 2 * x.a + x.b


def norm(x: FieldElement) -> Fraction:
    a, b, D = x.a, x.b, x.ctx.D
    if x.ctx.xi_case == "sqrt":
        return a * a - D * b * b
    return a * a + a * b - b * b * Fraction(D - 1, 4)


def is_totally_positive(x: FieldElement) -> bool:
    A, B = x.rational_sqrt_coords()
    D = x.ctx.D
    return sign_of(A, B, D) > 0 and sign_of(A, -B, D) > 0


def in_codifferent(x: FieldElement) -> bool:
    """Trace against the Z-basis (1, xi) is integral."""
    t1, t2 = trace(x), trace(x * x.ctx.xi)
    return t1.denominator == 1 and t2.denominator == 1


def alpha(ctx: FieldContext, i: int) -> FieldElement:
    """``alpha_i = p_i - q_i * xi'`` with ``alpha_{-1} = 1``."""
    if i < -1:
        raise InvalidInput("alpha_i needs i >= -1")
    p, q = ctx.convergent(i)
    if ctx.xi_case == "sqrt":
        return ctx.element(p, q)
    return ctx.element(p - q, q)


def semiconvergents(ctx: FieldContext, i: int) -> list[FieldElement]:
    """``[alpha_{2i-1} + r*alpha_{2i} for r = 0..u_{2i+1}]``, each checked totally positive."""
    if i < 0:
        raise InvalidInput("i must be >= 0")
    lo, step = alpha(ctx, 2 * i - 1), alpha(ctx, 2 * i)
    u = coefficient_at(ctx.cf, 2 * i + 1)
    out = [lo + step * r for r in range(u + 1)]
    for r, B in enumerate(out):
        if not is_totally_positive(B):
            raise InternalConventionError(
                f"D={ctx.D}, i={i}: semiconvergent B_{r}={B} is not totally positive")
    return out


def find_delta(ctx: FieldContext, i: int, search_limit: Optional[int] = None) -> FieldElement:
    """Totally positive ``delta`` in the codifferent with
    ``Tr(delta*alpha_{2i-1}) = 1`` and ``Tr(delta*alpha_{2i}) = 0``.

    Writing ``delta = (x + y*xi)/c`` the two trace conditions form an integer
    2x2 system whose determinant is +-1, so the solution is unique and found
    directly.  ``search_limit`` caps ``max(|x|, |y|)``; ``None`` means no cap.
    """
    if i < 0:
        raise InvalidInput("i must be >= 0")
    c = ctx.codifferent_denominator
    e1 = ctx.element(1) / c
    e2 = ctx.xi / c
    b1, b2 = alpha(ctx, 2 * i - 1), alpha(ctx, 2 * i)
    # Tr((x e1 + y e2) b) = x Tr(e1 b) + y Tr(e2 b)
    m11, m12 = trace(e1 * b1), trace(e2 * b1)
    m21, m22 = trace(e1 * b2), trace(e2 * b2)
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise SearchExhausted(f"D={ctx.D}, i={i}: degenerate trace system")
    x = m22 / det
    y = -m21 / det
    if x.denominator != 1 or y.denominator != 1:
        raise SearchExhausted(f"D={ctx.D}, i={i}: no codifferent solution")
    if search_limit is not None and max(abs(x), abs(y)) > search_limit:
        raise SearchExhausted(f"D={ctx.D}, i={i}: solution exceeds search_limit={search_limit}")
    delta = e1 * x + e2 * y
    if not is_totally_positive(delta):
        raise SearchExhausted(f"D={ctx.D}, i={i}: the unique solution is not totally positive")
    return delta


def transfer(gram_OH: Sequence[Sequence], delta: FieldElement) -> list[list[int]]:
    """Integer Gram matrix of ``Tr(delta * Q)`` on the basis
    ``(e_1, xi e_1, ..., e_R, xi e_R)``."""
    from .lattice import is_positive_definite

    ctx = delta.ctx
    R = len(gram_OH)
    G = [[delta._coerce(v) for v in row] for row in gram_OH]
    if any(len(row) != R for row in G):
        raise InvalidInput("Gram matrix must be square")
    for s in range(R):
        for t in range(R):
            if G[s][t] != G[t][s]:
                raise InvalidInput("Gram matrix must be symmetric")
            if not G[s][t].is_integral():
                raise InvalidInput("Gram entries must lie in O_H")
    if not in_codifferent(delta) or not is_totally_positive(delta):
        raise InvalidInput("delta must be a totally positive codifferent element")
    basis = (ctx.element(1), ctx.xi)
    M = [[0] * (2 * R) for _ in range(2 * R)]
    for s in range(R):
        for t in range(R):
            for a, wa in enumerate(basis):
                for b, wb in enumerate(basis):
                    v = trace(delta * wa * wb * G[s][t])
                    if v.denominator != 1:
                        raise InvalidInput("trace form is not integral")
                    M[2 * s + a][2 * t + b] = int(v)
    if not is_positive_definite(M):
        raise InvalidInput("trace form is not positive definite")
    return M
