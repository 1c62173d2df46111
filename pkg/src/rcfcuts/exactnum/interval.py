"""Rational intervals and boxes with exact endpoints."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def fmt_q(q: Fraction) -> str:
    """Canonical text form ``p/q`` (``p`` when the denominator is 1)."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> Fraction:
    return Fraction(str(text).strip())


class Bracket(enum.Enum):
    OPEN = "()"
    HALF_OPEN_RIGHT = "(]"
    HALF_OPEN_LEFT = "[)"
    CLOSED = "[]"

    @property
    def lo_closed(self) -> bool:
        return self in (Bracket.HALF_OPEN_LEFT, Bracket.CLOSED)

    @property
    def hi_closed(self) -> bool:
        return self in (Bracket.HALF_OPEN_RIGHT, Bracket.CLOSED)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    kind: Bracket = Bracket.OPEN

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and self.kind is not Bracket.CLOSED):
            raise ValueError(f"empty interval {self}")

    @classmethod
    def closed(cls, lo, hi) -> "RationalInterval":
        return cls(lo, hi, Bracket.CLOSED)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        q = as_fraction(q)
        if q < self.lo or q > self.hi:
            return False
        if q == self.lo and not self.kind.lo_closed:
            return False
        if q == self.hi and not self.kind.hi_closed:
            return False
        return True

    def __contains__(self, q) -> bool:
        return self.contains(q)

    def contains_interval(self, other: "RationalInterval") -> bool:
        """Exact set inclusion ``other ⊆ self``, bracket-aware."""
        if other.lo < self.lo or other.hi > self.hi:
            return False
        if other.lo == self.lo and other.kind.lo_closed and not self.kind.lo_closed:
            return False
        if other.hi == self.hi and other.kind.hi_closed and not self.kind.hi_closed:
            return False
        return True

    def disjoint(self, other: "RationalInterval") -> bool:
        return self.separator(other) is not None

    def separator(self, other: "RationalInterval"):
        """A rational ``r`` with self ≤ r ≤ other (or the reverse), else None.

        Returns ``(r, sign)`` where ``sign`` is -1 when self lies below.
        """
        for a, b, sign in ((self, other, -1), (other, self, 1)):
            if a.hi < b.lo:
                return a.hi, sign
            if a.hi == b.lo and not (a.kind.hi_closed and b.kind.lo_closed):
                return a.hi, sign
        return None

    def shift(self, q) -> "RationalInterval":
        q = as_fraction(q)
        return RationalInterval(self.lo + q, self.hi + q, self.kind)

    def with_kind(self, kind: Bracket) -> "RationalInterval":
        return RationalInterval(self.lo, self.hi, kind)

    def bisect(self) -> tuple["RationalInterval", "RationalInterval"]:
        m = self.midpoint
        return RationalInterval(self.lo, m, self.kind), RationalInterval(m, self.hi, self.kind)

    def __str__(self) -> str:
        left, right = self.kind.value
        return f"{left}{fmt_q(self.lo)}, {fmt_q(self.hi)}{right}"

    def to_json(self) -> dict:
        return {"lo": fmt_q(self.lo), "hi": fmt_q(self.hi), "kind": self.kind.value}

    @classmethod
    def from_json(cls, d: dict) -> "RationalInterval":
        return cls(parse_q(d["lo"]), parse_q(d["hi"]), Bracket(d.get("kind", "()")))


class Box(tuple):
    """Product of intervals, one per coordinate ``X0, X1, ...``."""

    def __new__(cls, intervals: Iterable[RationalInterval] = ()):
        return super().__new__(cls, tuple(intervals))

    @classmethod
    def of(cls, *pairs: Sequence) -> "Box":
        return cls(RationalInterval(lo, hi) for lo, hi in pairs)

    @property
    def dim(self) -> int:
        return len(self)

    def extend(self, iv: RationalInterval) -> "Box":
        return Box(tuple(self) + (iv,))

    def contains_point(self, pt: Sequence) -> bool:
        return len(pt) == len(self) and all(iv.contains(x) for iv, x in zip(self, pt))

    def contains_box(self, other: "Box") -> bool:
        return len(other) == len(self) and all(a.contains_interval(b) for a, b in zip(self, other))

    def widest(self) -> int:
        best = 0
        for j in range(1, len(self)):
            if self[j].width > self[best].width:
                best = j
        return best

    def split(self, j: int) -> tuple["Box", "Box"]:
        left, right = self[j].bisect()
        head, tail = tuple(self[:j]), tuple(self[j + 1:])
        return Box(head + (left,) + tail), Box(head + (right,) + tail)

    def __str__(self) -> str:
        if not self:
            return "∅"
        return "×".join(str(iv) for iv in self)

    def to_json(self) -> list:
        return [iv.to_json() for iv in self]
