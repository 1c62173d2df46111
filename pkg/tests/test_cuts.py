from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcfcuts.cli import algebraic_cut
from rcfcuts.cuts import (
    BudgetExceeded, CutKind, FunctionCut, NestingViolation, RationalCut, ScriptedCut, ScriptExhausted,
    cut_of_rational, distinct_at, first_separation, intervals_from_json_lines, realize_approx, refine,
)
from rcfcuts.exactnum import Bracket

mpmath.mp.prec = 200
SQRT2 = mpmath.sqrt(2)


def mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def test_right_leaning_cut_of_zero():
    c = cut_of_rational(0, CutKind.RIGHT_LEANING)
    for s in range(8):
        iv = c.interval(s)
        assert (iv.lo, iv.hi, iv.kind) == (Fraction(-1, 2 ** s), 0, Bracket.HALF_OPEN_RIGHT)
        assert 0 in iv


def test_left_leaning_cut_of_one():
    c = cut_of_rational(1, CutKind.LEFT_LEANING)
    for s in range(8):
        iv = c.interval(s)
        assert (iv.lo, iv.hi, iv.kind) == (1, 1 + Fraction(1, 2 ** s), Bracket.HALF_OPEN_LEFT)


def test_strict_cut_omits_its_point_from_both_sides():
    c = cut_of_rational(Fraction(1, 2), CutKind.STRICT)
    for s in range(10):
        iv = c.interval(s)
        assert iv.lo < Fraction(1, 2) < iv.hi
        assert not c.witnessed_left(Fraction(1, 2), s) and not c.witnessed_right(Fraction(1, 2), s)


@given(st.fractions(max_denominator=50), st.sampled_from(list(CutKind)), st.integers(0, 30))
def test_rational_cuts_nest_and_shrink(q, kind, s):
    c = RationalCut(q, kind)
    iv = refine(c, s)
    assert iv.width <= Fraction(1, 2 ** s)
    if kind is CutKind.RIGHT_LEANING:
        assert iv.hi == q
    if kind is CutKind.LEFT_LEANING:
        assert iv.lo == q
    hist = c.history()
    assert all(a.contains_interval(b) for a, b in zip(hist, hist[1:]))


def test_sqrt2_generator_against_mpmath():
    c = algebraic_cut([-2, 0, 1])
    iv = refine(c, 20)
    assert iv.width <= Fraction(1, 2 ** 20)
    assert mp(iv.lo) < SQRT2 < mp(iv.hi)


def test_scripted_cut_exhausts():
    c = ScriptedCut([(0, 1), (0, "1/2"), ("1/8", "1/2"), ("1/4", "1/2"), ("1/4", "3/8")])
    refine(c, 4)
    with pytest.raises(ScriptExhausted):
        refine(c, 7)


def test_nesting_is_enforced_on_every_pull():
    c = ScriptedCut([(0, 1), ("1/2", 2)])
    c.interval(0)
    with pytest.raises(NestingViolation):
        c.interval(1)


def test_realize_third_and_sqrt2():
    q = realize_approx(RationalCut(Fraction(1, 3)), Fraction(1, 100))
    assert abs(q - Fraction(1, 3)) < Fraction(1, 100)
    q = realize_approx(algebraic_cut([-2, 0, 1]), Fraction(1, 10 ** 6))
    assert abs(q * q - 2) < Fraction(3, 10 ** 6)


def test_realize_budget():
    c = ScriptedCut([(0, 1)], frozen=True)
    with pytest.raises(BudgetExceeded):
        realize_approx(c, Fraction(1, 10 ** 9), budget=50)
    with pytest.raises(ValueError):
        realize_approx(c, 0)


def test_separation_examples():
    assert distinct_at(RationalCut(0), RationalCut(1), 1)
    a = RationalCut(Fraction(1, 2))
    b = FunctionCut(lambda s: (Fraction(1, 2) - Fraction(1, 3 ** s), Fraction(1, 2) + Fraction(1, 3 ** s)))
    assert all(distinct_at(a, b, s) is None for s in range(30))
    sep = distinct_at(algebraic_cut([-2, 0, 1]), RationalCut(Fraction(1414, 1000)), 20)
    assert sep is not None and not sep.first_below
    assert Fraction(1414, 1000) < sep.witness < Fraction(14143, 10000)


@given(st.fractions(max_denominator=30), st.fractions(max_denominator=30))
def test_separation_is_monotone(p, q):
    a, b = RationalCut(p), RationalCut(q)
    s = first_separation(a, b, 40)
    if p == q:
        assert s is None
        return
    assert s is not None
    assert all(distinct_at(a, b, t) for t in range(s, s + 10))


def test_trace_lines_round_trip():
    c = RationalCut(Fraction(2, 3), CutKind.LEFT_LEANING)
    refine(c, 5)
    back = intervals_from_json_lines(c.trace_lines())
    assert [iv for _, iv in back] == c.history()
