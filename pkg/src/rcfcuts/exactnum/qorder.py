"""A fixed enumeration of the rationals.

``q(0) = 0``; for ``k >= 1`` the Calkin-Wilf value ``cw(k)`` sits at
position ``2k - 1`` and its negative at ``2k``. Calkin-Wilf levels coincide
with Stern-Brocot depths, so the earliest rational inside an interval is the
simplest one (least depth), found by a Stern-Brocot descent.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor

from .interval import RationalInterval, as_fraction


def calkin_wilf(k: int) -> Fraction:
    if k < 1:
        raise ValueError("Calkin-Wilf positions start at 1")
    a, b = 1, 1
    for bit in bin(k)[3:]:
        if bit == "0":
            b = a + b
        else:
            a = a + b
    return Fraction(a, b)


def calkin_wilf_index(q) -> int:
    q = as_fraction(q)
    if q <= 0:
        raise ValueError("Calkin-Wilf indexes positive rationals only")
    a, b = q.numerator, q.denominator
    bits = []
    while (a, b) != (1, 1):
        if a < b:
            # a run of left moves
            k, r = divmod(b, a)
            if r == 0:
                k -= 1
            bits.append("0" * k)
            b -= k * a
        else:
            k, r = divmod(a, b)
            if r == 0:
                k -= 1
            bits.append("1" * k)
            a -= k * b
    return int("1" + "".join(reversed(bits)), 2)


def q_at(i: int) -> Fraction:
    if i < 0:
        raise ValueError("negative index")
    if i == 0:
        return Fraction(0)
    k = (i + 1) // 2
    v = calkin_wilf(k)
    return v if i % 2 == 1 else -v


def q_index(q) -> int:
    q = as_fraction(q)
    if q == 0:
        return 0
    k = calkin_wilf_index(abs(q))
    return 2 * k - 1 if q > 0 else 2 * k


def first_rationals(n: int) -> list[Fraction]:
    return [q_at(i) for i in range(n)]


def sb_depth(q) -> int:
    """Stern-Brocot depth of ``|q|`` (sum of continued-fraction terms minus one)."""
    q = abs(as_fraction(q))
    if q == 0:
        return -1
    a, b, total = q.numerator, q.denominator, 0
    while b:
        t, r = divmod(a, b)
        total += t
        a, b = b, r
    return total - 1


def _below(x: Fraction, iv: RationalInterval) -> bool:
    return x < iv.lo or (x == iv.lo and not iv.kind.lo_closed)


def _above(x: Fraction, iv: RationalInterval) -> bool:
    return x > iv.hi or (x == iv.hi and not iv.kind.hi_closed)


def _simplest_positive(iv: RationalInterval) -> Fraction:
    ln, ld, rn, rd = 0, 1, 1, 0
    lo, hi = iv.lo, iv.hi
    while True:
        m = Fraction(ln + rn, ld + rd)
        if _below(m, iv):
            t = (lo * ld - ln) / (rn - lo * rd)
            k = floor(t) if not iv.kind.lo_closed else ceil(t) - 1
            ln, ld = ln + k * rn, ld + k * rd
        elif _above(m, iv):
            t = (rn - hi * rd) / (hi * ld - ln)
            k = floor(t) if not iv.kind.hi_closed else ceil(t) - 1
            rn, rd = rn + k * ln, rd + k * ld
        else:
            return m


def first_in(iv: RationalInterval) -> Fraction:
    """The rational of least index in ``iv``."""
    if iv.contains(0):
        return Fraction(0)
    if iv.lo >= 0:
        return _simplest_positive(iv)
    flipped = RationalInterval(-iv.hi, -iv.lo, _flip(iv))
    return -_simplest_positive(flipped)


def _flip(iv: RationalInterval):
    from .interval import Bracket

    return {
        Bracket.OPEN: Bracket.OPEN,
        Bracket.CLOSED: Bracket.CLOSED,
        Bracket.HALF_OPEN_LEFT: Bracket.HALF_OPEN_RIGHT,
        Bracket.HALF_OPEN_RIGHT: Bracket.HALF_OPEN_LEFT,
    }[iv.kind]
