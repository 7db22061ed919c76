"""Quadratic surds and their periodic continued fractions.

Everything here is exact integer arithmetic.  A surd is stored as
``(P + sqrt(d)) / Q`` with ``Q | d - P**2``; that divisibility makes the
standard PQa recurrence stay integral, and the pair ``(P, Q)`` then
identifies each complete quotient uniquely.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence, Union

from .errors import InvalidInput


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def sign_of(a, b, d: int) -> int:
    """Exact sign of ``a + b*sqrt(d)`` for rationals a, b and integer d >= 0."""
    a, b = Fraction(a), Fraction(b)
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0 or d == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2 d
    c = a * a - b * b * d
    if c == 0:
        return 0
    return sa if c > 0 else sb


def _small_primes_of(n: int, limit: int = 1000) -> list[int]:
    """Prime factors of ``n`` below ``limit``, then the leftover cofactor (if any)."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n and p < limit:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True, eq=False)
class QuadraticSurd:
    """The real number ``(P + sqrt(d)) / Q``.

    The constructor rescales ``(P, Q, d)`` when ``Q`` does not divide
    ``d - P**2`` and strips common factors when it safely can.
    """

    P: int
    Q: int
    d: int

    def __post_init__(self):
        P, Q, d = int(self.P), int(self.Q), int(self.d)
        if Q == 0:
            raise InvalidInput("Q must be nonzero")
        if d <= 1 or is_square(d):
            raise InvalidInput(f"d={d} must exceed 1 and not be a perfect square")
        if (d - P * P) % Q:
            P, Q, d = P * abs(Q), Q * abs(Q), d * Q * Q
        h = gcd(P, Q)
        if h > 1:
            for p in _small_primes_of(h):
                while (P % p == 0 and Q % p == 0 and d % (p * p) == 0
                       and ((d // (p * p)) - (P // p) ** 2) % (Q // p) == 0):
                    P, Q, d = P // p, Q // p, d // (p * p)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "d", d)

    def _key(self):
        return (Fraction(self.P, self.Q), Fraction(self.d, self.Q * self.Q), self.Q > 0)

    def __eq__(self, other):
        if not isinstance(other, QuadraticSurd):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __float__(self) -> float:
        return (self.P + self.d ** 0.5) / self.Q

    def __repr__(self) -> str:
        return f"QuadraticSurd(({self.P} + sqrt({self.d}))/{self.Q})"

    def floor(self) -> int:
        s = isqrt(self.d)
        if self.Q > 0:
            return (self.P + s) // self.Q
        return (self.P + s + 1) // self.Q

    def compare(self, r) -> int:
        """Sign of ``self - r`` for a rational ``r``."""
        r = Fraction(r)
        # (P + sqrt d)/Q - r = (P - rQ + sqrt d)/Q
        s = sign_of(self.P - r * self.Q, 1, self.d)
        return s if self.Q > 0 else -s

    def add_int(self, k: int) -> "QuadraticSurd":
        return QuadraticSurd(self.P + k * self.Q, self.Q, self.d)

    def frac(self) -> "QuadraticSurd":
        return self.add_int(-self.floor())

    def conjugate_float(self) -> float:
        return (self.P - self.d ** 0.5) / self.Q


@dataclass(frozen=True)
class PeriodicCF:
    """``[u_0; preperiod[1:], (period)]`` with the period repeating forever.

    The preperiod always holds at least ``u_0``; beyond that both parts are
    minimal.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(u) for u in self.preperiod)
        per = tuple(int(u) for u in self.period)
        if not pre or not per:
            raise InvalidInput("need u_0 and a nonempty period")
        if any(u < 1 for u in pre[1:]) or any(u < 1 for u in per):
            raise InvalidInput("partial quotients past index 0 must be >= 1")
        if len(pre) >= 2 and pre[-1] == per[-1]:
            raise InvalidInput("preperiod is not minimal")
        s = len(per)
        for k in range(1, s):
            if s % k == 0 and per == per[k:] + per[:k]:
                raise InvalidInput(f"period {per} is not minimal")
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def t(self) -> int:
        return len(self.preperiod)

    @property
    def s(self) -> int:
        return len(self.period)

    def __getitem__(self, j: int) -> int:
        return coefficient_at(self, j)

    def prefix(self, n: int) -> list[int]:
        return [coefficient_at(self, j) for j in range(n)]

    def __str__(self) -> str:
        per = "(" + ",".join(map(str, self.period)) + ")"
        mid = "".join(f"{u}, " for u in self.preperiod[1:])
        return f"[{self.preperiod[0]}; {mid}{per}]"


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def make_xi(D: int) -> QuadraticSurd:
    """Generator of the ring of integers of Q(sqrt D)."""
    D = int(D)
    if D <= 1:
        raise InvalidInput(f"D={D} must be > 1")
    if D % 4 == 0 or not is_squarefree(D):
        raise InvalidInput(f"D={D} is not squarefree")
    if D % 4 == 1:
        return QuadraticSurd(1, 2, D)
    return QuadraticSurd(0, 1, D)


def _pqa_step(P: int, Q: int, d: int, s: int):
    a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
    P1 = a * Q - P
    return a, P1, (d - P1 * P1) // Q


def expand(x: QuadraticSurd) -> PeriodicCF:
    """Periodic expansion of ``x`` with minimal preperiod and period.

    The tail is located by Floyd cycle detection on the PQa state ``(P, Q)``.
    """
    d = x.d
    s = isqrt(d)

    def f(state):
        _, P1, Q1 = _pqa_step(state[0], state[1], d, s)
        return (P1, Q1)

    x0 = (x.P, x.Q)
    tortoise, hare = f(x0), f(f(x0))
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(f(hare))
    mu = 0
    tortoise = x0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    mu = max(mu, 1)
    tortoise = x0
    for _ in range(mu):
        tortoise = f(tortoise)
    lam = 1
    hare = f(tortoise)
    while tortoise != hare:
        hare = f(hare)
        lam += 1

    coeffs = []
    P, Q = x0
    for _ in range(mu + lam):
        a, P, Q = _pqa_step(P, Q, d, s)
        coeffs.append(a)
    return PeriodicCF(tuple(coeffs[:mu]), tuple(coeffs[mu:]))


def coefficient_at(cf: PeriodicCF, j: int) -> int:
    if j < 0:
        raise InvalidInput("index must be >= 0")
    t = len(cf.preperiod)
    if j < t:
        return cf.preperiod[j]
    return cf.period[(j - t) % len(cf.period)]


CFLike = Union[PeriodicCF, Sequence[int]]


def _coeff_source(cf: CFLike):
    if isinstance(cf, PeriodicCF):
        return lambda j: coefficient_at(cf, j), None
    seq = list(cf)
    return (lambda j: seq[j]), len(seq)


def convergents(cf: CFLike, n: int) -> list[Convergent]:
    """Convergents ``p_j / q_j`` for ``j = 0..n``.

    ``cf`` may also be a finite coefficient list; ``n`` is then capped at
    its last index.
    """
    if n < 0:
        raise InvalidInput("n must be >= 0")
    get, length = _coeff_source(cf)
    if length is not None:
        n = min(n, length - 1)
    p2, p1, q2, q1 = 0, 1, 1, 0
    out = []
    for j in range(n + 1):
        u = get(j)
        p2, p1 = p1, u * p1 + p2
        q2, q1 = q1, u * q1 + q2
        out.append(Convergent(p1, q1, j))
    return out


def iter_convergents(cf: CFLike) -> Iterable[Convergent]:
    """Unbounded convergent stream, seeded with index -2 and -1."""
    get, length = _coeff_source(cf)
    yield Convergent(0, 1, -2)
    yield Convergent(1, 0, -1)
    p2, p1, q2, q1 = 0, 1, 1, 0
    j = 0
    while length is None or j < length:
        u = get(j)
        p2, p1 = p1, u * p1 + p2
        q2, q1 = q1, u * q1 + q2
        yield Convergent(p1, q1, j)
        j += 1


def max_odd_in(cf: PeriodicCF) -> tuple[int, int]:
    """Max of u_j over odd j, and the smallest odd j attaining it."""
    best, where = -1, -1
    for j in range(1, cf.t + 2 * cf.s + 1, 2):
        u = coefficient_at(cf, j)
        if u > best:
            best, where = u, j
    return best, where


def max_odd_coefficient(D: int) -> tuple[int, int]:
    return max_odd_in(expand(make_xi(D)))


def _mobius_of(coeffs: Sequence[int]):
    """Matrix ``[[p, p'], [q, q']]`` of the map y -> [c_0; ..., c_k, y]."""
    A, B, C, Dd = 1, 0, 0, 1
    for u in coeffs:
        A, B, C, Dd = A * u + B, A, C * u + Dd, C
    return A, B, C, Dd


def _apply_mobius(A: int, B: int, C: int, Dd: int, y: QuadraticSurd) -> QuadraticSurd:
    p0, q0, d = y.P, y.Q, y.d
    alpha = A * p0 + B * q0
    gamma = C * p0 + Dd * q0
    u = alpha * gamma - A * C * d
    v = A * gamma - alpha * C
    w = gamma * gamma - C * C * d
    if v == 0:
        raise InvalidInput("Mobius image is rational")
    if v > 0:
        return QuadraticSurd(u, w, v * v * d)
    return QuadraticSurd(-u, -w, v * v * d)


def evaluate(cf: PeriodicCF) -> QuadraticSurd:
    """Exact value of a periodic continued fraction."""
    p, pp, q, qq = _mobius_of(cf.period)
    # tail y satisfies q*y^2 + (qq - p)*y - pp = 0 with y > 1
    disc = (qq - p) ** 2 + 4 * pp * q
    if is_square(disc):
        raise InvalidInput("continued fraction encodes a rational number")
    y = QuadraticSurd(p - qq, 2 * q, disc)
    return _apply_mobius(*_mobius_of(cf.preperiod), y)


def finite_cf(r: Fraction) -> list[int]:
    """Finite expansion of a rational (last term > 1 unless the value is 1 or 0)."""
    r = Fraction(r)
    out = []
    while True:
        a = r.numerator // r.denominator
        out.append(a)
        r -= a
        if r == 0:
            return out
        r = 1 / r
