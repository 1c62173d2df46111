import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from rcfcuts.exactnum import (
    Box, Bracket, MultiPoly, NotFound, RationalInterval, count_roots, eval_box, excludes_zero,
    find_avoiding_box, first_in, fmt_q, isolate_all, parse_q, poly_enumerate, poly_index, q_at,
    q_index, refine_root, sturm_isolate,
)
from rcfcuts.exactnum.polyenum import weight

X0, X1 = MultiPoly.var(0), MultiPoly.var(1)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)


def iv(lo, hi, kind=Bracket.OPEN):
    return RationalInterval(Fraction(lo), Fraction(hi), kind)


# -- rationals and intervals ---------------------------------------------

@given(fractions)
def test_text_form_round_trips(q):
    assert parse_q(fmt_q(q)) == q


def test_interval_brackets_decide_endpoint_membership():
    assert 1 not in iv(0, 1)
    assert 1 in iv(0, 1, Bracket.HALF_OPEN_RIGHT)
    assert 0 in iv(0, 1, Bracket.HALF_OPEN_LEFT)
    assert 0 not in iv(0, 1, Bracket.HALF_OPEN_RIGHT)


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        RationalInterval(Fraction(1), Fraction(1))


# -- the fixed order of Q -------------------------------------------------

def test_q_order_prefix():
    want = ["0", "1", "-1", "1/2", "-1/2", "2", "-2", "1/3", "-1/3", "3/2"]
    assert [fmt_q(q_at(i)) for i in range(10)] == want


def test_q_order_is_injective_on_a_prefix():
    qs = [q_at(i) for i in range(3000)]
    assert len(set(qs)) == len(qs)
    assert all(q_index(q) == i for i, q in enumerate(qs))


def _least_denominator_member(box):
    """Independent oracle: the member with least denominator, then least |numerator|."""
    d = 1
    while True:
        lo, hi = box.lo * d, box.hi * d
        cands = [n for n in range(math.floor(lo), math.ceil(hi) + 1) if Fraction(n, d) in box]
        if cands:
            return Fraction(min(cands, key=abs), d)
        d += 1


@given(fractions, fractions, st.sampled_from(list(Bracket)))
def test_first_in_is_the_simplest_member(a, b, kind):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    box = RationalInterval(a, b, kind)
    assert first_in(box) == _least_denominator_member(box)


@given(st.integers(0, 400), st.integers(1, 400))
def test_first_in_matches_a_scan_of_the_order(i, j):
    a, b = sorted((q_at(i), q_at(j)))
    if a == b:
        return
    box = RationalInterval(a, b, Bracket.CLOSED)
    q = first_in(box)
    assert q_index(q) <= max(i, j)
    assert all(q_at(k) not in box for k in range(q_index(q)))


# -- polynomial enumeration ----------------------------------------------

def test_enumeration_starts_with_x0():
    assert poly_enumerate(0) == X0


def test_enumeration_round_trip_first_thousand():
    seen = set()
    for i in range(1000):
        p = poly_enumerate(i)
        assert not p.is_zero()
        assert poly_index(p) == i
        seen.add(p)
    assert len(seen) == 1000


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 1)), st.integers(-3, 3), min_size=1, max_size=3))
def test_every_small_poly_has_an_index(terms):
    p = MultiPoly(terms)
    # classes above weight 4 are too large to materialize in a test
    if p.is_zero() or weight(p) > 4:
        return
    assert poly_enumerate(poly_index(p)) == p


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2)), st.integers(-9, 9), max_size=5))
def test_text_form_of_polys_round_trips(terms):
    p = MultiPoly(terms)
    assert MultiPoly.parse(str(p)) == p


# -- interval enclosure ---------------------------------------------------

def test_eval_box_examples():
    assert eval_box(X0, Box.of((1, 2))).contains_interval(iv(1, 2))
    enc = eval_box(X0 * X1, Box.of((1, 2), (3, 4)))
    assert enc.lo <= 3 and enc.hi >= 8
    enc = eval_box(X0 ** 2 - 2, Box.of(("7/5", "3/2")))
    assert Fraction(-5, 100) < enc.lo and enc.hi < Fraction(26, 100)


def test_eval_box_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_box(X0 * X1, Box.of((1, 2)))


def test_eval_box_soundness_on_random_samples():
    rng = random.Random(11)
    for _ in range(10_000 // 20):
        dims = rng.randint(1, 3)
        terms = {tuple(rng.randint(0, 3) for _ in range(dims)): rng.randint(-6, 6) for _ in range(4)}
        p = MultiPoly(terms)
        los = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(dims)]
        box = Box.of(*[(lo, lo + Fraction(rng.randint(1, 12), rng.randint(1, 6))) for lo in los])
        enc = eval_box(p, box) if p.nvars <= dims else None
        if enc is None:
            continue
        for _ in range(20):
            pt = [b.lo + (b.hi - b.lo) * Fraction(rng.randint(1, 99), 100) for b in box]
            v = p.evaluate(pt)
            assert enc.lo <= v <= enc.hi


# -- Sturm isolation ------------------------------------------------------

def test_sturm_examples():
    roots = sturm_isolate(X0 ** 2 - 2, iv(0, 2))
    assert len(roots) == 1 and roots[0].lo ** 2 < 2 < roots[0].hi ** 2
    assert sturm_isolate(X0 ** 2 + 1, iv(-10, 10)) == []
    two = sturm_isolate(X0 * (X0 - 1), iv(-1, 2))
    assert len(two) == 2 and 0 in two[0] and 1 in two[1]


def test_sturm_endpoints_on_roots_are_nudged():
    roots = sturm_isolate((X0 - 1) * (X0 - 2), iv(1, 2))
    assert roots == []
    roots = sturm_isolate((X0 - 1) ** 3 * (X0 - 3), iv(0, 4))
    assert len(roots) == 2
    for r in roots:
        assert (X0 - 1).evaluate([r.lo]) * (X0 - 3).evaluate([r.lo]) != 0


coeff_lists = st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: any(c[1:]))


@given(coeff_lists)
def test_sturm_matches_sympy_real_roots(coeffs):
    p = MultiPoly.from_univariate(coeffs)
    x = sympy.Symbol("x")
    oracle = sympy.Poly(list(reversed(coeffs)), x).real_roots()
    distinct = sorted(set(oracle), key=lambda r: float(r))
    got = isolate_all(p)
    assert len(got) == len(distinct)
    for J, r in zip(got, distinct):
        lo, hi = sympy.Rational(J.lo.numerator, J.lo.denominator), sympy.Rational(J.hi.numerator, J.hi.denominator)
        assert lo < r < hi
        assert count_roots(p, J) == 1


@given(coeff_lists, st.integers(4, 30))
def test_refine_root_keeps_the_root(coeffs, bits):
    p = MultiPoly.from_univariate(coeffs)
    for J in isolate_all(p):
        K = refine_root(p, J, Fraction(1, 2 ** bits))
        assert J.contains_interval(K) and K.width <= Fraction(1, 2 ** bits)
        assert count_roots(p, K) == 1


# -- root-avoiding boxes --------------------------------------------------

def test_avoid_constant_sign_returns_target():
    res = find_avoiding_box(X0 - 5, Box(), iv(0, 1))
    assert res.interval == iv(0, 1) and res.splits == 0


def test_avoid_linear_over_prefix_uses_full_box():
    res = find_avoiding_box(X1 - X0, Box.of((0, 1)), iv(2, 3))
    assert res.prefix == Box.of((0, 1)) and res.interval == iv(2, 3)


def test_avoid_radius_sqrt2_circle_is_far_from_this_box():
    pre, tgt = Box.of(("141/100", "142/100")), iv("141/100", "142/100")
    res = find_avoiding_box(X0 ** 2 + X1 ** 2 - 2, pre, tgt, 32)
    assert res.splits == 0 and excludes_zero(X0 ** 2 + X1 ** 2 - 2, res.box)


def test_avoid_near_the_circle_needs_subdivision():
    # the circle of radius 2 passes through (1.41, 1.42)^2
    p = X0 ** 2 + X1 ** 2 - 4
    pre, tgt = Box.of(("141/100", "142/100")), iv("141/100", "142/100")
    assert eval_box(p, pre.extend(tgt)).contains(0)
    res = find_avoiding_box(p, pre, tgt, 32)
    assert res.splits > 0
    assert excludes_zero(p, res.box)
    assert pre.contains_box(res.prefix) and tgt.contains_interval(res.interval)


def test_avoid_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        find_avoiding_box(MultiPoly(), Box(), iv(0, 1))


def test_avoid_budget_exhaustion_raises_not_found():
    # 0 lies inside the target, so success needs at least one split
    with pytest.raises(NotFound):
        find_avoiding_box(X0, Box(), iv(-1, 1), 0)
