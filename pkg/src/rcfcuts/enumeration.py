"""Enumerations of cuts: Friedberg deduplication and the set/cut bridge."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .cuts import BudgetExceeded, CutKind, CutStream, RationalCut, distinct_at
from .exactnum.interval import RationalInterval, fmt_q


class CutEnumeration:
    """Uniform list of cut streams; step ``t`` shows stage ``t`` of cuts ``0..t``.

    ``streams`` is either a sequence or a factory ``index -> CutStream``
    (with ``size=None`` for an unbounded enumeration).
    """

    def __init__(self, streams: Sequence[CutStream] | Callable[[int], CutStream], size: int | None = None):
        if callable(streams):
            self._factory = streams
            self._cache: dict[int, CutStream] = {}
            self.size = size
        else:
            self._factory = None
            self._cache = dict(enumerate(streams))
            self.size = len(streams) if size is None else size

    def stream(self, i: int) -> CutStream:
        if self.size is not None and not 0 <= i < self.size:
            raise IndexError(i)
        if i not in self._cache:
            self._cache[i] = self._factory(i)
        return self._cache[i]

    def indices_at(self, step: int) -> range:
        top = step + 1 if self.size is None else min(step + 1, self.size)
        return range(top)

    def step(self, t: int) -> list[tuple[int, RationalInterval]]:
        return [(i, self.stream(i).interval(t)) for i in self.indices_at(t)]

    def trace_lines(self, steps: int) -> list[str]:
        lines = []
        for t in range(steps):
            for i, iv in self.step(t):
                kind = self.stream(i).kind.value
                lines.append(json.dumps(
                    {"step": t, "index": i, "lo": fmt_q(iv.lo), "hi": fmt_q(iv.hi), "kind": kind},
                    sort_keys=True))
        return lines


@dataclass
class Admission:
    step: int
    output_index: int
    input_index: int


@dataclass
class FriedbergResult:
    source: CutEnumeration
    back_map: dict[int, int] = field(default_factory=dict)
    log: list[Admission] = field(default_factory=list)
    steps_run: int = 0

    @property
    def output(self) -> CutEnumeration:
        back = self.back_map
        return CutEnumeration([self.source.stream(back[k]) for k in range(len(back))])

    def admitted_inputs(self) -> list[int]:
        return [self.back_map[k] for k in range(len(self.back_map))]

    def log_lines(self) -> list[str]:
        return [json.dumps({"step": a.step, "output": a.output_index, "input": a.input_index}, sort_keys=True)
                for a in self.log]


def friedberg(source: CutEnumeration, steps: int = 64) -> FriedbergResult:
    """Run the deduplicating transformer for ``steps`` steps.

    An input cut is admitted at the first step where its interval is
    disjoint from the intervals of every admitted cut and of every earlier,
    still unadmitted input. Several admissions in one step go in input order.
    """
    result = FriedbergResult(source)
    admitted: list[int] = []
    admitted_set: set[int] = set()
    for t in range(steps):
        for i in source.indices_at(t):
            if i in admitted_set:
                continue
            rivals = admitted + [j for j in range(i) if j not in admitted_set]
            c = source.stream(i)
            if all(distinct_at(c, source.stream(j), t) for j in rivals):
                k = len(admitted)
                result.back_map[k] = i
                result.log.append(Admission(t, k, i))
                admitted.append(i)
                admitted_set.add(i)
        result.steps_run = t + 1
    return result


# -- the set/cut bridge ---------------------------------------------------

@dataclass(frozen=True)
class SetScript:
    """A subset of the naturals: explicit below ``N``, then all-in or all-out."""

    N: int
    members: frozenset
    tail: str = "finite"

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if self.tail not in ("finite", "cofinite"):
            raise ValueError(f"tail must be 'finite' or 'cofinite', not {self.tail!r}")
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))
        if any(not 0 <= m < self.N for m in self.members):
            raise ValueError("members must lie in range(N)")

    @classmethod
    def from_json(cls, data: dict | str) -> "SetScript":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["N"]), frozenset(data.get("members", [])), data.get("tail", "finite"))

    def to_json(self) -> dict:
        return {"N": self.N, "members": sorted(self.members), "tail": self.tail}

    def __contains__(self, n: int) -> bool:
        if n >= self.N:
            return self.tail == "cofinite"
        return n in self.members

    @property
    def is_finite(self) -> bool:
        return self.tail == "finite"

    def canonical(self) -> "SetScript":
        n = self.N
        if self.is_finite:
            n = max(self.members, default=-1) + 1
        else:
            while n > 0 and (n - 1) in self.members:
                n -= 1
        return SetScript(n, frozenset(m for m in self.members if m < n), self.tail)

    def is_omega(self) -> bool:
        return not self.is_finite and self.canonical().N == 0

    def is_empty(self) -> bool:
        return self.is_finite and not self.members


def set_real(s: SetScript) -> Fraction:
    """Exact value of ``r_S``."""
    total = sum((Fraction(1, 2 ** (n + 1)) for n in s.members), Fraction(0))
    if not s.is_finite:
        total += Fraction(1, 2 ** s.N)
    return total


def set_to_cut(s: SetScript) -> RationalCut:
    """The non-strict cut whose thresholds recover ``s``.

    ``n ∈ S`` exactly when ``2^-(n+1) + Σ_{m∈S, m<n} 2^-(m+1)`` is on the left
    side. The empty set maps to the right-leaning cut of 0 and the full set
    to the left-leaning cut of 1; otherwise a finite set's last threshold
    equals ``r_S`` and must sit in ``A`` (left-leaning), while a cofinite set
    keeps ``r_S`` in ``B`` (right-leaning).
    """
    r = set_real(s)
    if s.is_empty():
        kind = CutKind.RIGHT_LEANING
    elif s.is_omega():
        kind = CutKind.LEFT_LEANING
    elif s.is_finite:
        kind = CutKind.LEFT_LEANING
    else:
        kind = CutKind.RIGHT_LEANING
    cut = RationalCut(r, kind)
    cut.source = "derived"
    return cut


def threshold(members_below: Sequence[int], n: int) -> Fraction:
    return Fraction(1, 2 ** (n + 1)) + sum((Fraction(1, 2 ** (m + 1)) for m in members_below), Fraction(0))


def _side(c: CutStream, q: Fraction, budget: int) -> bool:
    for s in range(budget):
        iv = c.interval(s)
        if q <= iv.lo:
            return True
        if q >= iv.hi:
            return False
    raise BudgetExceeded(f"cut did not separate from {q} within {budget} stages")


def cut_to_set(c: CutStream, n: int, budget: int = 256) -> bool:
    """Membership of ``n`` in the set coded by a non-strict cut in [0, 1]."""
    below: list[int] = []
    for m in range(n + 1):
        inside = _side(c, threshold(below, m), budget)
        if m == n:
            return inside
        if inside:
            below.append(m)
    raise AssertionError("unreachable")


def real_of_set(s: SetScript, precision_bits: int) -> Fraction:
    """Partial sum of ``r_S`` over ``n < precision_bits``; within ``2^-precision_bits``."""
    return sum((Fraction(1, 2 ** (n + 1)) for n in range(precision_bits) if n in s), Fraction(0))


def denotes_same_set(s: SetScript, t: SetScript) -> bool:
    a, b = s.canonical(), t.canonical()
    return a == b


def is_collision_pair(s: SetScript, t: SetScript) -> bool:
    """Distinct sets with equal reals: necessarily one finite, one cofinite."""
    return not denotes_same_set(s, t) and set_real(s) == set_real(t)
