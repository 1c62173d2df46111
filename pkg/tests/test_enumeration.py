import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcfcuts.cli import algebraic_cut
from rcfcuts.cuts import BudgetExceeded, CutKind, RationalCut, ScriptedCut, distinct_at
from rcfcuts.enumeration import (
    CutEnumeration, SetScript, cut_to_set, friedberg, is_collision_pair, real_of_set, set_real, set_to_cut,
)


def sets(max_n=24):
    return st.builds(
        lambda n, bits, tail: SetScript(n, frozenset(i for i in range(n) if bits >> i & 1), tail),
        st.integers(0, max_n), st.integers(0, 2 ** max_n - 1), st.sampled_from(["finite", "cofinite"]),
    )


# -- bridge ---------------------------------------------------------------

def test_empty_and_full_sets_map_to_the_extreme_cuts():
    e = set_to_cut(SetScript(0, frozenset()))
    assert (e.value, e.kind) == (0, CutKind.RIGHT_LEANING)
    w = set_to_cut(SetScript(0, frozenset(), "cofinite"))
    assert (w.value, w.kind) == (1, CutKind.LEFT_LEANING)


def test_small_set_reals():
    assert real_of_set(SetScript(1, {0}), 40) == Fraction(1, 2)
    assert real_of_set(SetScript(2, {1}), 40) == Fraction(1, 4)
    assert real_of_set(SetScript(0, set()), 40) == 0
    assert real_of_set(SetScript(3, {0, 2}), 40) == Fraction(5, 8)


def test_one_and_its_cofinite_twin_collide():
    s, t = SetScript(2, {1}), SetScript(2, set(), "cofinite")
    assert set_real(s) == set_real(t) == Fraction(1, 4)
    assert is_collision_pair(s, t)
    # the cuts still tell them apart
    assert [cut_to_set(set_to_cut(s), n) for n in range(5)] == [False, True, False, False, False]
    assert [cut_to_set(set_to_cut(t), n) for n in range(5)] == [False, False, True, True, True]


def test_membership_of_zero_set():
    c = set_to_cut(SetScript(1, {0}))
    assert cut_to_set(c, 0) and not cut_to_set(c, 1)
    z = RationalCut(0, CutKind.RIGHT_LEANING)
    assert not any(cut_to_set(z, n) for n in range(10))


def test_cut_to_set_budget():
    c = ScriptedCut([(0, 1)], CutKind.RIGHT_LEANING, frozen=True)
    with pytest.raises(BudgetExceeded):
        cut_to_set(c, 0, budget=20)


@given(sets())
def test_round_trip(s):
    c = set_to_cut(s)
    assert all(cut_to_set(c, n) == (n in s) for n in range(s.N + 3))


@given(sets(10), sets(10))
def test_collisions_only_on_finite_cofinite_pairs(s, t):
    if set_real(s) == set_real(t) and s.canonical() != t.canonical():
        assert {s.tail, t.tail} == {"finite", "cofinite"}
    # exact reals agree at every precision exactly when they are equal
    same = all(real_of_set(s, b) == real_of_set(t, b) for b in range(0, 40))
    assert same == (s.canonical() == t.canonical())


@given(sets(12), st.integers(0, 40))
def test_partial_sums_within_precision(s, bits):
    assert 0 <= set_real(s) - real_of_set(s, bits) <= Fraction(1, 2 ** bits)


# -- Friedberg ------------------------------------------------------------

def sqrt2():
    return algebraic_cut([-2, 0, 1])


def test_duplicates_collapse():
    res = friedberg(CutEnumeration([RationalCut(Fraction(1, 2)), RationalCut(Fraction(1, 2)), sqrt2()]), 40)
    assert res.back_map == {0: 0, 1: 2}


def test_all_identical_inputs_admit_one():
    res = friedberg(CutEnumeration([RationalCut(Fraction(1, 3)) for _ in range(5)]), 40)
    assert res.admitted_inputs() == [0]


def test_separated_inputs_all_admitted():
    src = CutEnumeration([RationalCut(k) for k in range(6)])
    res = friedberg(src, 20)
    assert sorted(res.back_map.values()) == list(range(6))


def test_admissions_are_pairwise_separated_when_admitted():
    rng = random.Random(3)
    reals = [Fraction(rng.randrange(8), 7) for _ in range(10)]
    src = CutEnumeration([RationalCut(q) for q in reals])
    res = friedberg(src, 64)
    for adm in res.log:
        c = src.stream(adm.input_index)
        for other in res.log:
            if other.output_index < adm.output_index:
                assert distinct_at(c, src.stream(other.input_index), adm.step)
    assert {reals[i] for i in res.admitted_inputs()} == set(reals)
    out = res.output
    assert out.size == len(set(reals))


def test_unbounded_factory_enumeration():
    src = CutEnumeration(lambda i: RationalCut(Fraction(i % 3)), size=None)
    res = friedberg(src, 30)
    assert [Fraction(i % 3) for i in res.admitted_inputs()] == [0, 1, 2]
