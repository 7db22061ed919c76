"""Acceptance criteria, one test per criterion.

Each criterion is evaluated once (cached) as a list of named sub-checks; the
test logs a single PASS/FAIL line and then asserts every sub-check.  Run this
file directly to print the lines without pytest.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

import pytest

from _helpers import random_pd_gram

SEED = 20240917


@dataclass
class Outcome:
    number: int
    title: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(c[1] for c in self.checks)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        failed = [f"{n} ({d})" if d else n for n, ok, d in self.checks if not ok]
        tail = f"; failed: {', '.join(failed)}" if failed else ""
        return (f"criterion {self.number} [{status}] {self.title}: "
                f"{sum(c[1] for c in self.checks)}/{len(self.checks)} checks, "
                f"{self.seconds:.1f}s{tail}")


def _timed(fn):
    def wrapper():
        t = time.perf_counter()
        out = fn()
        out.seconds = time.perf_counter() - t
        return out
    wrapper.__name__ = fn.__name__
    return cache(wrapper)


# 1 -----------------------------------------------------------------------------------------

@_timed
def criterion_1() -> Outcome:
    from uqfrank.surd_cf import (QuadraticSurd, convergents, evaluate, expand, is_squarefree,
                                 make_xi)
    from math import isqrt

    out = Outcome(1, "continued fraction round trip and structure")
    t0 = time.perf_counter()
    bad_roundtrip, bad_det, bad_pal = [], [], []
    n = 0
    for D in range(2, 10 ** 4 + 1):
        if D % 4 == 0 or not is_squarefree(D):
            continue
        n += 1
        xi = make_xi(D)
        cf = expand(xi)
        if evaluate(cf) != xi:
            bad_roundtrip.append(D)
        cs = convergents(cf, cf.t + 2 * cf.s)
        if any(b.p * a.q - a.p * b.q != (-1) ** a.index for a, b in zip(cs, cs[1:])):
            bad_det.append(D)
        root = expand(QuadraticSurd(0, 1, D))
        per = root.period
        if per[-1] != 2 * isqrt(D) or per[:-1] != per[:-1][::-1]:
            bad_pal.append(D)
    elapsed = time.perf_counter() - t0
    out.check("round trip", not bad_roundtrip, f"{len(bad_roundtrip)} of {n} fail")
    out.check("determinant identity", not bad_det, f"{len(bad_det)} fail")
    out.check("sqrt palindrome", not bad_pal, f"{len(bad_pal)} fail")
    out.check("runtime <= 60 s", elapsed <= 60, f"{elapsed:.1f}s")
    return out


# 2 -----------------------------------------------------------------------------------------

@_timed
def criterion_2() -> Outcome:
    from uqfrank.lattice import bound_C, e8_gram, norm_histogram

    out = Outcome(2, "short-vector counts below C(r, n)")
    t0 = time.perf_counter()
    rnd = random.Random(SEED)
    viol_C, viol_1, viol_2, odd = [], [], [], []
    for _ in range(200):
        r = rnd.randint(1, 6)
        G = random_pd_gram(rnd, r)
        hist = norm_histogram(G, 20)
        for n in range(1, 21):
            if hist[n] > bound_C(r, n, G.det).hi:
                viol_C.append((G.entries, n))
            if hist[n] % 2:
                odd.append((G.entries, n))
        if hist[1] > 2 * r:
            viol_1.append(G.entries)
        if hist[2] > max(480, 2 * r * (r - 1)):
            viol_2.append(G.entries)
    elapsed = time.perf_counter() - t0
    out.check("N(n) <= C(r,n,det)", not viol_C, f"{len(viol_C)} violations")
    out.check("N(1) <= 2r", not viol_1)
    out.check("N(2) <= max(480, 2r(r-1))", not viol_2)
    out.check("N(n) even", not odd)
    out.check("E8 N(2) = 240", norm_histogram(e8_gram(), 2)[2] == 240)
    out.check("runtime <= 300 s", elapsed <= 300, f"{elapsed:.1f}s")
    return out


# 3 -----------------------------------------------------------------------------------------

@_timed
def criterion_3() -> Outcome:
    from uqfrank.lattice import bound_C, bound_C_simplified

    out = Outcome(3, "simplified bound dominates C(r, n)")
    bad = [(r, n) for r in range(3, 51) for n in range(3, 21)
           if not bound_C(r, n, 1, 256).hi <= bound_C_simplified(r, n, 1, 256).lo]
    out.check("C <= simplified for r 3..50, n 3..20", not bad, f"violations at {bad[:5]}")
    return out


# 4 -----------------------------------------------------------------------------------------

@_timed
def criterion_4() -> Outcome:
    from uqfrank.errors import UQFError
    from uqfrank.lattice import is_positive_definite
    from uqfrank.numberfield import (FieldContext, find_delta, in_codifferent,
                                     is_totally_positive, semiconvergents, trace, transfer)
    from uqfrank.surd_cf import is_squarefree

    out = Outcome(4, "semiconvergents, delta and the trace form")
    t0 = time.perf_counter()
    failures = []
    cases = 0
    for D in range(2, 2001):
        if D % 4 == 0 or not is_squarefree(D):
            continue
        ctx = FieldContext(D)
        t, s = ctx.cf.t, ctx.cf.s
        i = 0
        while 2 * i + 1 <= t + 2 * s:
            cases += 1
            err = ""
            try:
                Bs = semiconvergents(ctx, i)
                delta = find_delta(ctx, i)
                ok = (all(is_totally_positive(b) for b in Bs)
                      and in_codifferent(delta) and is_totally_positive(delta)
                      and all(trace(delta * b) == 1 for b in Bs))
                M = transfer([[1]], delta)
                ok = ok and M[0][1] == M[1][0] and is_positive_definite(M)
            except UQFError as exc:
                ok, err = False, str(exc)
            if not ok:
                failures.append((D, i, err))
            i += 1
    elapsed = time.perf_counter() - t0
    ctx2 = FieldContext(2)
    d2 = find_delta(ctx2, 0)
    out.check("all squarefree D <= 2000", not failures, f"{len(failures)} of {cases} fail")
    out.check("D=2 delta = (2 - sqrt 2)/4", d2.rational_sqrt_coords() == (Fraction(1, 2), Fraction(-1, 4)))
    out.check("D=2 transfer = [[1,-1],[-1,2]]", transfer([[1]], d2) == [[1, -1], [-1, 2]])
    out.check("runtime <= 600 s", elapsed <= 600, f"{elapsed:.1f}s")
    return out


# 5 -----------------------------------------------------------------------------------------

@_timed
def criterion_5() -> Outcome:
    from uqfrank.equidist import (discrepancy, erdos_turan_rhs, stepIII_bound,
                                  trig_sum_bound_check)

    out = Outcome(5, "discrepancy bounds")
    t0 = time.perf_counter()
    rnd = random.Random(SEED + 5)
    for kind in ("sqrt", "half"):
        step_bad, et_bad = 0, 0
        for X in (10 ** 3, 10 ** 4, 10 ** 5):
            step = stepIII_bound(kind, X)
            ets = {K: erdos_turan_rhs(kind, X, K) for K in (10, 100)}
            for _ in range(50):
                a, b = sorted(Fraction(rnd.randint(0, 10 ** 6), 10 ** 6) for _ in range(2))
                d = abs(discrepancy(kind, X, a, b))
                step_bad += d > step.hi
                et_bad += sum(d > e.hi for e in ets.values())
        out.check(f"{kind}: |D| <= stepIII bound", step_bad == 0, f"{step_bad} violations")
        out.check(f"{kind}: |D| <= Erdos-Turan rhs, K in (10, 100)", et_bad == 0,
                  f"{et_bad} violations")
        s5 = stepIII_bound(kind, 10 ** 5)
        out.check(f"{kind}: stepIII bound < X/3 at X = 1e5", s5.hi < Fraction(10 ** 5, 3),
                  f"bound {float(s5):.0f} vs X/3 = 33333")
        trig_bad = []
        for k in range(1, 101):
            lhs, rhs = trig_sum_bound_check(kind, 10 ** 3, k)
            if lhs > rhs * (1 + 1e-6):
                trig_bad.append(k)
        out.check(f"{kind}: trig sum bound, k <= 100", not trig_bad, f"fails at k = {trig_bad[:5]}")
    elapsed = time.perf_counter() - t0
    out.check("runtime <= 600 s", elapsed <= 600, f"{elapsed:.1f}s")
    return out


# 6 -----------------------------------------------------------------------------------------

@_timed
def criterion_6() -> Outcome:
    from uqfrank.measure import (build_cover, cover_contains, cover_interval_I, qsum_truncated,
                                 qsum_upper_bound, rank_interval, tail_union_measure)
    from uqfrank.surd_cf import coefficient_at, expand, is_squarefree, make_xi

    out = Outcome(6, "interval measure machinery")
    t0 = time.perf_counter()
    rnd = random.Random(SEED + 6)

    bad = 0
    for _ in range(500):
        ks = [rnd.randint(1, 10) for _ in range(rnd.randint(1, 5))]
        N = rnd.randint(0, 50)
        bad += not tail_union_measure(ks, N) > rank_interval(ks).length / (3 * (N + 2))
    out.check("tail-union inequality, 500 intervals", bad == 0, f"{bad} violations")

    bad = 0
    for _ in range(100):
        ks = [rnd.randint(1, 10) for _ in range(rnd.randint(1, 5))]
        L = rnd.randint(1, 50)
        I = cover_interval_I(ks, L)
        bad += sum(not rank_interval(ks + [k]).issubset(I) for k in range(L + 1, 201))
    out.check("cover interval containment up to k = 200", bad == 0, f"{bad} violations")

    sums = {(1, 200): qsum_truncated(1, 200), (2, 200): qsum_truncated(2, 200),
            (3, 200): qsum_upper_bound(3, 200)}
    out.check("qsum < 2 for N <= 3, K = 200", all(v < 2 for v in sums.values()),
              ", ".join(f"N={N}: {float(v):.6f}" for (N, _), v in sums.items()))

    samples = []
    Ds = [D for D in range(2, 10 ** 5 + 1) if D % 4 and is_squarefree(D)]
    for D in rnd.sample(Ds, 1000):
        xi = make_xi(D)
        cf = expand(xi)
        samples.append((xi.frac(), [coefficient_at(cf, j) for j in range(1, 8, 2)]))

    count_bad, meas_bad, sound_bad = [], [], []
    for B in (1, 2, 3):
        for n in (1, 2, 3, 4):
            for L in range(1, 11):
                cover = build_cover(B, n, L)
                if cover.count > cover.declared_count_bound:
                    count_bad.append((B, n, L, cover.count, cover.declared_count_bound))
                if cover.measure > cover.declared_measure_bound:
                    meas_bad.append((B, n, L))
                for x, odd in samples:
                    if all(u <= B for u in odd[:n]) and not cover_contains(cover, x):
                        sound_bad.append((B, n, L))
    worst = max(count_bad, key=lambda c: c[3] / c[4], default=None)
    out.check("cover interval count <= declared formula", not count_bad,
              f"{len(count_bad)} of 120 grid points exceed it, worst (B,n,L)={worst[:3]} "
              f"has {worst[3]} intervals vs {worst[4]}" if worst else "")
    out.check("cover measure <= declared bound", not meas_bad, f"{meas_bad[:5]}")
    out.check("membership soundness, 1000 samples", not sound_bad, f"{sound_bad[:5]}")
    elapsed = time.perf_counter() - t0
    out.check("runtime <= 600 s", elapsed <= 600, f"{elapsed:.1f}s")
    return out


# 7 -----------------------------------------------------------------------------------------

@_timed
def criterion_7() -> Outcome:
    from uqfrank.survey import census, census_brute, corollary_bound, corollary_bound_man

    out = Outcome(7, "census consistency and corollary reports")
    mism = [(kind, B) for kind in ("xi", "sqrt_all", "half_all") for B in (1, 2, 3, 5)
            if census(10 ** 4, B, kind) != census_brute(10 ** 4, B, kind)]
    out.check("census = brute force at X = 1e4", not mism, f"{mism}")
    man = corollary_bound_man(10 ** 6, 2)
    out.check("weaker-precondition report: precondition holds, count <= bound",
              man.precondition_ok and man.count <= man.bound.hi,
              f"count {man.count}, bound {float(man.bound):.3g}")
    cor = corollary_bound(10 ** 6, 2, count=man.count)
    out.check("corollary report flags precondition false", cor.precondition_ok is False)
    t = time.perf_counter()
    census(10 ** 5, 2, threads=1)
    dt5 = time.perf_counter() - t
    out.check("X = 1e5 census <= 60 s", dt5 <= 60, f"{dt5:.2f}s")
    t = time.perf_counter()
    census(10 ** 6, 2)
    dt6 = time.perf_counter() - t
    out.check("X = 1e6 census <= 600 s", dt6 <= 600, f"{dt6:.2f}s")
    return out


# 8 -----------------------------------------------------------------------------------------

@_timed
def criterion_8() -> Outcome:
    from uqfrank.lattice import bound_B
    from uqfrank.survey import exclusion_count, min_rank_classical, min_rank_general, u_and_period

    out = Outcome(8, "rank lower bounds and exclusion counts")
    out.check("min_rank_classical(10, 1) = 6", min_rank_classical(10, 1) == 6)
    out.check("min_rank_general(250) = 9", min_rank_general(250) == 9)
    mono = []
    for m in (1, 2, 3):
        ranks = [min_rank_classical(u, m) for u in range(1, 10 ** 4 + 1)]
        if ranks != sorted(ranks):
            mono.append(m)
    out.check("monotone in u for u <= 1e4", not mono, f"m = {mono}")
    X = 10 ** 4
    sieve, u, _ = u_and_period(X)
    bad = []
    for R, m in [(1, 1), (2, 1), (3, 1), (5, 1), (1, 2), (8, 2), (9, 2), (2, 3), (3, 3)]:
        Bhi = bound_B(R, m).hi
        direct = sum(1 for D in range(2, X + 1) if sieve[D] and 0 < u[D] < Bhi)
        rep = exclusion_count(R, m, X)
        if rep.count != direct or rep.count > X:
            bad.append((R, m, rep.count, direct))
    out.check("exclusion_count matches census at X = 1e4", not bad, f"{bad}")
    return out


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("fn", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_acceptance(fn, acceptance_log):
    res = fn()
    acceptance_log[res.number] = res.line()
    print(res.line())
    failed = [f"{n}: {d}" for n, ok, d in res.checks if not ok]
    assert not failed, "; ".join(failed)


if __name__ == "__main__":
    for fn in CRITERIA:
        print(fn().line(), flush=True)
