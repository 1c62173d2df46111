"""Stage simulator for the Σ⁰₂ construction of archimedean fields.

Index ``e`` starts from the interval ``(e, e+1)``. When ``W_{f(e)}`` is
unchanged at a stage, the interval shrinks around a root of its current
polynomial. When it changes, the interval moves into a root-free gap of
that polynomial and away from the roots of the first ``s`` polynomials in
``X0..Xe`` over the predecessors' boxes, and a new polynomial is chosen.

The polynomials ``p_0, p_1, ...`` form a sparse listing of ``Z[X]``: position
``4^k`` holds the ``k``-th polynomial of the global univariate order, every
other position holds the linear polynomial of the next rational in the fixed
Q-order. The least index with a root in an interval is then computable
exactly without scanning millions of candidates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from ..exactnum.avoid import NotFound, find_avoiding_box
from ..exactnum.interval import Box, RationalInterval
from ..exactnum.poly import MultiPoly
from ..exactnum.polyenum import iter_polys, univariate_enumerate
from ..exactnum.qorder import first_in, q_at, q_index
from ..exactnum.sturm import count_roots, refine_root, sturm_isolate
from .script import CeScript
from .trace import Trace

AVOID_BUDGET = 32


def _is_pow4(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0 and (n.bit_length() - 1) % 2 == 0


def _pow4_upto(n: int) -> int:
    """How many powers of 4 are ``<= n``."""
    return 0 if n < 1 else (n.bit_length() - 1) // 2 + 1


def listing_poly(n: int) -> MultiPoly:
    """The ``n``-th polynomial of the listing used by this construction."""
    if n < 0:
        raise ValueError("negative index")
    if _is_pow4(n):
        return univariate_enumerate((n.bit_length() - 1) // 2)
    q = q_at(n - _pow4_upto(n))
    return MultiPoly({(1,): q.denominator, (): -q.numerator})


def _linear_position(m: int) -> int:
    """Index of the ``m``-th linear slot."""
    n = m
    while _is_pow4(n) or n - _pow4_upto(n) != m:
        n += 1
    return n


def has_root(p: MultiPoly, iv: RationalInterval) -> bool:
    return p.degree(0) >= 1 and count_roots(p, iv) > 0


def least_index(iv: RationalInterval, start: int = 0) -> int:
    """Least ``n >= start`` such that ``listing_poly(n)`` has a root in ``iv``.

    Callers pass ``start`` only when every index below it is known to have
    no root in ``iv``.
    """
    best = _linear_position(q_index(first_in(iv)))
    for k in itertools.count():
        pos = 4 ** k
        if pos >= best:
            break
        if pos >= start and has_root(univariate_enumerate(k), iv):
            return pos
    return best


@dataclass
class Sigma2State:
    intervals: dict[int, RationalInterval] = field(default_factory=dict)
    index: dict[int, int] = field(default_factory=dict)
    held: dict[int, list[int]] = field(default_factory=dict)
    stage: int = 0


def _first_root_interval(p: MultiPoly, iv: RationalInterval) -> RationalInterval:
    roots = sturm_isolate(p, iv)
    if not roots:
        raise AssertionError(f"{p} lost its root in {iv}")
    return roots[0]


def _strictly_inside(p: MultiPoly, J: RationalInterval, iv: RationalInterval) -> RationalInterval:
    while J.lo <= iv.lo or J.hi >= iv.hi:
        J = refine_root(p, J, J.width / 4)
    return J


def _shrink(p: MultiPoly, iv: RationalInterval) -> RationalInterval:
    """Unchanged branch: halve the distance from each end to a root of ``p``."""
    if p.degree(0) == 1:
        c0, c1 = p.univariate_coeffs(0)
        r = Fraction(-c0, c1)
        J = RationalInterval.closed(r, r)
    else:
        J = _strictly_inside(p, _first_root_interval(p, iv), iv)
    return RationalInterval((iv.lo + J.lo) / 2, (iv.hi + J.hi) / 2)


def _root_free_gap(p: MultiPoly, iv: RationalInterval) -> RationalInterval:
    """Widest gap of ``iv`` free of roots of ``p``, pulled strictly inside."""
    edges = [iv.lo]
    for J in sturm_isolate(p, iv):
        J = _strictly_inside(p, J, iv)
        edges += [J.lo, J.hi]
    edges.append(iv.hi)
    gaps = [(b - a, -i, a, b) for i, (a, b) in enumerate(zip(edges[::2], edges[1::2])) if b > a]
    _, _, a, b = max(gaps)
    m = (b - a) / 8
    return RationalInterval(a + m, b - m)


def run_sigma2(script: CeScript, stages: int | None = None, indices: int | None = None,
               avoid_budget: int = AVOID_BUDGET) -> tuple[Trace, Sigma2State]:
    """Simulate stages ``0..stages`` for indices ``0..indices-1``."""
    stages = script.horizon if stages is None else stages
    script.check(stages)
    if indices is None:
        indices = int(script.extra.get("indices", max(script.W, default=-1) + 1))
    trace = Trace("sigma2")
    st = Sigma2State()
    for e in range(indices):
        iv = RationalInterval(e, e + 1)
        n = least_index(iv)
        st.intervals[e], st.index[e], st.held[e] = iv, n, [n]
        trace.add(0, "interval", e=e, lo=iv.lo, hi=iv.hi, n=n, branch="init", poly=str(listing_poly(n)))
    for s in range(stages):
        prev = dict(st.intervals)
        for e in range(indices):
            iv, n = st.intervals[e], st.index[e]
            p = listing_poly(n)
            w = script.f(e)
            if script.W_at(w, s + 1) == script.W_at(w, s):
                new = _shrink(p, iv)
                trace.add(s + 1, "interval", e=e, lo=new.lo, hi=new.hi, n=n, branch="unchanged")
                st.intervals[e] = new
                continue
            new = _root_free_gap(p, iv)
            trace.add(s + 1, "discard", e=e, n=n, poly=str(p))
            prefix = Box(prev[i] for i in range(e))
            for k, r in enumerate(itertools.islice(iter_polys(e), s)):
                if r.degree(e) == 0:
                    continue
                try:
                    new = find_avoiding_box(r, prefix, new, avoid_budget, split_prefix=False).interval
                except NotFound:
                    trace.add(s + 1, "escape", e=e, r=k, poly=str(r))
            n_new = least_index(new, n + 1)
            st.intervals[e], st.index[e] = new, n_new
            st.held[e].append(n_new)
            trace.add(s + 1, "interval", e=e, lo=new.lo, hi=new.hi, n=n_new, branch="changed",
                      poly=str(listing_poly(n_new)))
        st.stage = s + 1
    return trace, st

