import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcfcuts.exactnum import _kernels_py as py

try:
    from rcfcuts.exactnum import _kernels as cy
except ImportError:
    cy = None

BACKENDS = [py] + ([cy] if cy is not None else [])

coeffs = st.lists(st.integers(-10 ** 6, 10 ** 6), max_size=9)
points = st.tuples(st.integers(-10 ** 9, 10 ** 9), st.integers(1, 10 ** 9))


def _sign(v):
    return (v > 0) - (v < 0)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
@given(coeffs, points)
def test_sign_at_matches_fraction_evaluation(k, c, pt):
    x = Fraction(*pt)
    assert k.sign_at(c, *pt) == _sign(sum(ci * x ** i for i, ci in enumerate(c)))


@given(st.lists(coeffs, max_size=6), points)
def test_sign_variations_agree(seq, pt):
    want = py.sign_variations(seq, *pt)
    signs = [s for s in (py.sign_at(c, *pt) for c in seq) if s]
    assert want == sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if cy is not None:
        assert cy.sign_variations(seq, *pt) == want


box_terms = st.lists(st.tuples(st.integers(-9, 9), st.tuples(*[st.integers(0, 3)] * 2)), min_size=1, max_size=6)
box_sides = st.tuples(st.integers(-20, 20), st.integers(0, 15), st.integers(1, 8))


@given(box_terms, box_sides, box_sides, st.lists(st.integers(0, 100), min_size=2, max_size=2))
def test_box_eval_is_sound_and_backends_agree(terms, side0, side1, ts):
    lo = [side0[0], side1[0]]
    hi = [side0[0] + side0[1], side1[0] + side1[1]]
    dens = [side0[2], side1[2]]
    lo_n, hi_n, den = py.box_eval(terms, lo, hi, dens)
    # a sample point inside the box must evaluate inside the enclosure
    pt = [Fraction(lo[j] * 100 + (hi[j] - lo[j]) * ts[j], 100 * dens[j]) for j in range(2)]
    v = sum(c * pt[0] ** e[0] * pt[1] ** e[1] for c, e in terms)
    assert Fraction(lo_n, den) <= v <= Fraction(hi_n, den)
    if cy is not None:
        assert cy.box_eval(terms, lo, hi, dens) == (lo_n, hi_n, den)


def _backend_in_subprocess(env_extra):
    env = dict(os.environ)
    env.pop("RCFCUTS_PURE_PYTHON", None)
    env.update(env_extra)
    out = subprocess.run([sys.executable, "-c", "import rcfcuts; print(rcfcuts.BACKEND)"],
                         capture_output=True, text=True, env=env, timeout=60, check=True)
    return out.stdout.strip()


def test_environment_forces_the_fallback():
    assert _backend_in_subprocess({"RCFCUTS_PURE_PYTHON": "1"}) == "python"


@pytest.mark.skipif(cy is None, reason="compiled extension not built")
def test_compiled_backend_selected_by_default():
    assert _backend_in_subprocess({}) == "cython"
