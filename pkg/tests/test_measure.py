import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from uqfrank.errors import BudgetExceeded, InvalidInput
from uqfrank.measure import (CLOSED, HALF_OPEN, RationalInterval, build_cover, cover_contains,
                             cover_count_formula, cover_interval_I, cover_measure_formula,
                             merge_closed, qsum_truncated, qsum_upper_bound, rank_interval,
                             tail_union_measure)
from uqfrank.surd_cf import QuadraticSurd, coefficient_at, expand, is_squarefree, make_xi


def cf_value(ks):
    """[0; k_1, ..., k_N] by backward evaluation."""
    x = Fraction(0)
    for k in reversed(ks):
        x = 1 / (k + x)
    return x


digits = st.lists(st.integers(1, 10), min_size=1, max_size=5)


def test_rank_interval_examples():
    assert rank_interval([3]) == RationalInterval(Fraction(1, 4), Fraction(1, 3), HALF_OPEN)
    assert rank_interval([1, 1]) == RationalInterval(Fraction(1, 2), Fraction(2, 3), HALF_OPEN)
    iv = rank_interval([2, 2])
    # mediant of 1/2 and 2/5; the point 5/12 = [0; 2, 2, 2] is interior
    assert (iv.lo, iv.hi) == (Fraction(2, 5), Fraction(3, 7))
    assert iv.contains(Fraction(5, 12)) and iv.lo < Fraction(5, 12) < iv.hi
    with pytest.raises(InvalidInput):
        rank_interval([])


def test_golden_ratio_in_rank_interval():
    x = make_xi(5).frac()   # (sqrt 5 - 1)/2 = [0; 1, 1, ...]
    for n in range(1, 12):
        assert rank_interval([1] * n).contains(x)


@settings(max_examples=300, deadline=None)
@given(digits)
def test_rank_interval_endpoints_match_backward_evaluation(ks):
    iv = rank_interval(ks)
    ends = sorted([cf_value(ks), cf_value(ks[:-1] + [ks[-1] + 1])])
    assert (iv.lo, iv.hi) == tuple(ends)
    assert iv.contains(iv.lo) and not iv.contains(iv.hi)


@settings(max_examples=200, deadline=None)
@given(digits, st.integers(1, 30))
def test_nesting_and_partition(ks, K):
    parent = rank_interval(ks)
    kids = [rank_interval(ks + [k]) for k in range(1, K + 1)]
    assert all(c.issubset(parent) and c.length > 0 for c in kids)
    spans = sorted((c.lo, c.hi) for c in kids)
    assert all(a[1] <= b[0] for a, b in zip(spans, spans[1:]))
    total = sum(c.length for c in kids) + tail_union_measure(ks, K)
    assert total == parent.length


def test_tail_union_examples():
    assert tail_union_measure([], 0) == 1
    assert tail_union_measure([], 2) == Fraction(1, 3)
    assert tail_union_measure([1], 1) > rank_interval([1]).length / 9


@settings(max_examples=300, deadline=None)
@given(digits, st.integers(0, 50))
def test_tail_union_oracle_and_inequality(ks, N):
    oracle = abs(cf_value(ks + [N + 1]) - cf_value(ks))
    assert tail_union_measure(ks, N) == oracle
    assert tail_union_measure(ks, N) > rank_interval(ks).length / (3 * (N + 2))


def test_cover_interval_examples():
    I = cover_interval_I([1], 1)
    assert (I.lo, I.hi, I.closure) == (Fraction(2, 3), Fraction(1), CLOSED)
    assert all(rank_interval([1, k]).issubset(I) for k in range(2, 51))
    J = cover_interval_I([2, 1], 3)
    assert all(rank_interval([2, 1, k]).issubset(J) for k in range(4, 101))


@settings(max_examples=100, deadline=None)
@given(digits, st.integers(1, 20))
def test_cover_interval_contains_tail_and_is_short(ks, L):
    I = cover_interval_I(ks, L)
    for k in range(L + 1, 201):
        assert rank_interval(ks + [k]).issubset(I)
    q = _q(ks)
    assert I.length < Fraction(1, L * q * q)


def _q(ks):
    q, qq = 1, 0
    for k in ks:
        q, qq = k * q + qq, q
    return q


def test_merge_closed():
    ivs = [RationalInterval(Fraction(0), Fraction(1, 3)), RationalInterval(Fraction(1, 3), Fraction(1, 2)),
           RationalInterval(Fraction(3, 4), Fraction(1))]
    assert [(i.lo, i.hi) for i in merge_closed(ivs)] == [(0, Fraction(1, 2)), (Fraction(3, 4), 1)]


def test_count_and_measure_formulas():
    for B in range(1, 6):
        for L in range(1, 6):
            assert cover_count_formula([1, 3], [B, B], L) == 3 * B + L
    assert cover_count_formula([1], [1], 1) == 1
    assert cover_measure_formula([2, 2], 5) == Fraction(11, 12) ** 2 + Fraction(2, 5)
    assert cover_measure_formula([2, 2], 5, Fraction(5, 3)) == Fraction(11, 12) ** 2 + Fraction(1, 3)


def test_build_cover_examples():
    c = build_cover(1, 1, 1)
    assert [(i.lo, i.hi) for i in c.intervals] == [(Fraction(1, 2), Fraction(1))]
    assert c.count <= c.declared_count_bound == 1
    c = build_cover(2, 2, 5)
    assert c.measure <= Fraction(11, 12) ** 2 + Fraction(2, 5)
    assert c.declared_measure_bound == Fraction(11, 12) ** 2 + Fraction(2, 5)
    with pytest.raises(BudgetExceeded):
        build_cover(5, 6, 10, budget=1000)


def test_cover_contains_examples():
    x = QuadraticSurd(-1, 1, 2)   # sqrt 2 - 1
    assert not cover_contains(build_cover(1, 1, 1), x)
    assert cover_contains(build_cover(2, 1, 1), x)
    assert cover_contains(build_cover(1, 3, 10), make_xi(5).add_int(-1))
    with pytest.raises(InvalidInput):
        cover_contains(build_cover(1, 1, 1), make_xi(5))


def test_cover_soundness_on_quadratic_irrationals():
    rnd = random.Random(11)
    covers = {(B, n, L): build_cover(B, n, L) for B in (1, 2, 3) for n in (1, 2, 3) for L in (1, 4)}
    Ds = [D for D in rnd.sample(range(2, 10 ** 5), 3000) if D % 4 and is_squarefree(D)]
    hits = 0
    for D in Ds[:1000]:
        xi = make_xi(D)
        x, cf = xi.frac(), expand(xi)
        for (B, n, L), cover in covers.items():
            if all(coefficient_at(cf, j) <= B for j in range(1, 2 * n, 2)):
                hits += 1
                assert cover_contains(cover, x), (D, B, n, L)
    assert hits > 100


def test_cover_json():
    c = build_cover(2, 2, 3)
    data = json.loads(json.dumps(c.to_json()))
    assert data["params"] == {"B": 2, "n": 2, "L": 3}
    los = [Fraction(iv["lo"]) for iv in data["intervals"]]
    assert los == [iv.lo for iv in c.intervals]
    assert Fraction(data["measure"]) == c.measure


def test_qsum_examples():
    assert qsum_truncated(1, 4) == Fraction(205, 144)
    direct = sum(Fraction(1, (a * b + 1) ** 2) for a in range(1, 51) for b in range(1, 51))
    assert qsum_truncated(2, 50) == direct < 2


def test_qsum_monotone_and_below_two():
    for N in (1, 2, 3):
        prev = Fraction(0)
        for K in range(1, 16):
            s = qsum_truncated(N, K)
            assert prev <= s < 2
            prev = s


@pytest.mark.parametrize("N, K", [(1, 30), (2, 40), (3, 12)])
def test_qsum_upper_bound_dominates(N, K, backend):
    exact = qsum_truncated(N, K)
    ub = qsum_upper_bound(N, K)
    assert exact <= ub <= exact + Fraction(K ** N, 2 ** 52)


def test_cover_measure_within_sharper_slack():
    for B in (1, 2, 3):
        for n in (1, 2, 3):
            for L in range(1, 9):
                cover = build_cover(B, n, L)
                assert cover.measure <= cover_measure_formula([B] * n, L, Fraction(5, 3)), (B, n, L)
