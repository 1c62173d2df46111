"""Sturm sequences and real root isolation for integer polynomials."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

from . import kernels
from .interval import RationalInterval, as_fraction
from .poly import MultiPoly

Coeffs = list  # low to high


def _strip(a: Coeffs) -> Coeffs:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def primitive(a: Sequence) -> list[int]:
    """Clear denominators and content, keeping the sign of the leading coefficient."""
    a = _strip([as_fraction(c) for c in a])
    if not a:
        return []
    den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in a), 1)
    ints = [int(c * den) for c in a]
    g = reduce(gcd, (abs(c) for c in ints if c), 0)
    return [c // g for c in ints]


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(c) for c in _strip(a)]
    b = [Fraction(c) for c in _strip(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = _strip(a)
    return _strip(q), a


def derivative(a: Sequence) -> list:
    return [i * a[i] for i in range(1, len(a))]


def poly_gcd(a: Sequence, b: Sequence) -> list[int]:
    a, b = primitive(a), primitive(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, primitive(r)
    return primitive(a) if a else []


def squarefree_part(a: Sequence) -> list[int]:
    a = primitive(a)
    if len(a) <= 2:
        return a
    g = poly_gcd(a, derivative(a))
    if len(g) <= 1:
        return a
    q, r = poly_divmod(a, g)
    assert not r
    out = primitive(q)
    if out[-1] * a[-1] < 0:
        out = [-c for c in out]
    return out


def sturm_sequence(a: Sequence) -> list[list[int]]:
    """Sturm chain of ``a``; each member scaled by a positive constant."""
    p0 = primitive(a)
    if len(p0) <= 1:
        return [p0] if p0 else []
    seq = [p0, primitive(derivative(p0))]
    while True:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        # primitive() keeps sign; negate for the Sturm recurrence
        seq.append(primitive([-c for c in r]))
    return seq


def sign_at(a: Sequence[int], q) -> int:
    q = as_fraction(q)
    return kernels.sign_at(list(a), q.numerator, q.denominator)


def variations(seq: list, q) -> int:
    q = as_fraction(q)
    return kernels.sign_variations(seq, q.numerator, q.denominator)


def _as_coeffs(p) -> list[int]:
    if isinstance(p, MultiPoly):
        var = max(p.max_var, 0)
        return p.univariate_coeffs(var)
    return list(p)


def root_bound(p) -> Fraction:
    """Every real root of ``p`` has absolute value below the returned bound."""
    a = primitive(_as_coeffs(p))
    if len(a) <= 1:
        return Fraction(1)
    lead = abs(a[-1])
    return 1 + Fraction(max(abs(c) for c in a[:-1]), lead)


class _Counter:
    def __init__(self, coeffs: list[int]):
        self.sf = squarefree_part(coeffs)
        self.seq = sturm_sequence(self.sf)

    def is_root(self, q) -> bool:
        return bool(self.sf) and len(self.sf) > 1 and sign_at(self.sf, q) == 0

    def count_open(self, lo, hi) -> int:
        """Distinct roots in the open interval ``(lo, hi)``."""
        if len(self.sf) <= 1:
            return 0
        n = variations(self.seq, lo) - variations(self.seq, hi)
        if self.is_root(hi):
            n -= 1
        return n


def count_roots(p, iv: RationalInterval) -> int:
    """Number of distinct real roots of ``p`` in ``iv`` (brackets respected)."""
    c = _Counter(_as_coeffs(p))
    n = c.count_open(iv.lo, iv.hi)
    if iv.kind.lo_closed and c.is_root(iv.lo):
        n += 1
    if iv.kind.hi_closed and c.is_root(iv.hi) and iv.hi != iv.lo:
        n += 1
    return n


def has_root_in(p, iv: RationalInterval) -> bool:
    return count_roots(p, iv) > 0


_SPLITS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
           Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)]


def _split_point(c: _Counter, lo: Fraction, hi: Fraction) -> Fraction:
    w = hi - lo
    for t in _SPLITS:
        m = lo + t * w
        if not c.is_root(m):
            return m
    k = 6
    while True:
        m = lo + w / k
        if not c.is_root(m):
            return m
        k += 1


def _nudge(c: _Counter, end: Fraction, toward: Fraction) -> Fraction:
    """Move a root endpoint toward the interior until no root lies in between."""
    step = (toward - end) / 2
    while True:
        cand = end + step
        lo, hi = (end, cand) if end < cand else (cand, end)
        if not c.is_root(cand) and c.count_open(lo, hi) == 0:
            return cand
        step /= 2


def sturm_isolate(p, window: RationalInterval) -> list[RationalInterval]:
    """Disjoint open intervals inside ``window``, one per distinct root of ``p`` there.

    The window is treated as open. Endpoints of the result are never roots.
    """
    coeffs = _as_coeffs(p)
    if not _strip(coeffs):
        raise ValueError("cannot isolate the roots of the zero polynomial")
    c = _Counter(coeffs)
    if len(c.sf) <= 1:
        return []
    lo, hi = window.lo, window.hi
    if c.is_root(lo):
        lo = _nudge(c, lo, hi)
    if c.is_root(hi):
        hi = _nudge(c, hi, lo)
    out = []
    stack = [(lo, hi, c.count_open(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(RationalInterval(a, b))
            continue
        m = _split_point(c, a, b)
        stack.append((m, b, c.count_open(m, b)))
        stack.append((a, m, c.count_open(a, m)))
    out.sort(key=lambda iv: iv.lo)
    return out


def isolate_all(p) -> list[RationalInterval]:
    b = root_bound(p)
    return sturm_isolate(p, RationalInterval(-b, b))


def refine_root(p, iv: RationalInterval, width) -> RationalInterval:
    """Shrink an isolating interval of ``p`` to width ≤ ``width`` by bisection."""
    c = _Counter(_as_coeffs(p))
    width = as_fraction(width)
    lo, hi = iv.lo, iv.hi
    if c.count_open(lo, hi) != 1:
        raise ValueError(f"{iv} does not isolate a single root of {p}")
    while hi - lo > width:
        m = _split_point(c, lo, hi)
        if c.count_open(lo, m) == 1:
            hi = m
        else:
            lo = m
    return RationalInterval(lo, hi)
