"""Dedekind cuts as stage-indexed nested-interval processes.

A cut ``(A, B)`` is never held as a pair of sets. It is a stream whose
stage-``s`` interval runs from ``a_s = max A_s`` to ``b_s = min B_s``; the
bracket on each end follows the cut's kind. A rational ``q`` is witnessed in
``A`` by stage ``s`` when ``q <= a_s`` and in ``B`` when ``q >= b_s``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactnum.interval import Bracket, RationalInterval, as_fraction, fmt_q


class ScriptExhausted(LookupError):
    """A scripted stream was pulled past the end of its script."""


class BudgetExceeded(RuntimeError):
    """A search ran out of stages before reaching its goal."""


class NestingViolation(AssertionError):
    """A stream emitted an interval not contained in its predecessor."""


class CutKind(enum.Enum):
    RIGHT_LEANING = "right"
    LEFT_LEANING = "left"
    STRICT = "strict"

    @property
    def bracket(self) -> Bracket:
        return _BRACKETS[self]


_BRACKETS = {
    CutKind.RIGHT_LEANING: Bracket.HALF_OPEN_RIGHT,
    CutKind.LEFT_LEANING: Bracket.HALF_OPEN_LEFT,
    CutKind.STRICT: Bracket.OPEN,
}


class CutStream:
    """Base class: subclasses implement ``_produce(stage) -> (lo, hi)``.

    Every pull goes through :meth:`interval`, which caches the history and
    checks that each new interval nests inside the previous one.
    """

    source = "derived"

    def __init__(self, kind: CutKind):
        self.kind = kind
        self._history: list[RationalInterval] = []

    def _produce(self, stage: int) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    @property
    def stages_pulled(self) -> int:
        return len(self._history)

    def interval(self, stage: int) -> RationalInterval:
        if stage < 0:
            raise ValueError("negative stage")
        while len(self._history) <= stage:
            s = len(self._history)
            lo, hi = self._produce(s)
            iv = RationalInterval(lo, hi, self.kind.bracket)
            if self._history and not self._history[-1].contains_interval(iv):
                raise NestingViolation(
                    f"stage {s} interval {iv} escapes stage {s - 1} interval {self._history[-1]}"
                )
            self._history.append(iv)
        return self._history[stage]

    def latest(self) -> RationalInterval:
        if not self._history:
            return self.interval(0)
        return self._history[-1]

    def history(self) -> list[RationalInterval]:
        return list(self._history)

    def witnessed_left(self, q, stage: int) -> bool:
        return as_fraction(q) <= self.interval(stage).lo

    def witnessed_right(self, q, stage: int) -> bool:
        return as_fraction(q) >= self.interval(stage).hi

    def trace_lines(self) -> list[str]:
        return [
            json.dumps({"stage": s, "lo": fmt_q(iv.lo), "hi": fmt_q(iv.hi), "kind": self.kind.value},
                       sort_keys=True)
            for s, iv in enumerate(self._history)
        ]

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.kind.value} after {len(self._history)} stages>"


class RationalCut(CutStream):
    """Cut of a rational; width ``2**-s`` at stage ``s``."""

    source = "rational"

    def __init__(self, q, kind: CutKind = CutKind.STRICT):
        super().__init__(kind)
        self.value = as_fraction(q)

    def _produce(self, stage):
        w = Fraction(1, 2 ** stage)
        q = self.value
        if self.kind is CutKind.RIGHT_LEANING:
            return q - w, q
        if self.kind is CutKind.LEFT_LEANING:
            return q, q + w
        return q - w / 2, q + w / 2


class ScriptedCut(CutStream):
    """Replays a fixed list of intervals.

    A frozen script repeats its last interval forever instead of raising
    :class:`ScriptExhausted`.
    """

    source = "scripted"

    def __init__(self, intervals: Sequence[Sequence], kind: CutKind = CutKind.STRICT, frozen: bool = False):
        super().__init__(kind)
        self.script = [(as_fraction(lo), as_fraction(hi)) for lo, hi in intervals]
        self.frozen = frozen
        if not self.script:
            raise ValueError("empty script")

    def _produce(self, stage):
        if stage < len(self.script):
            return self.script[stage]
        if self.frozen:
            return self.script[-1]
        raise ScriptExhausted(f"script has {len(self.script)} stages; stage {stage} requested")


class ExtendableCut(CutStream):
    """A stream whose script is appended to as a construction proceeds."""

    source = "scripted"

    def __init__(self, kind: CutKind = CutKind.STRICT):
        super().__init__(kind)
        self.script: list[tuple[Fraction, Fraction]] = []

    def push(self, lo, hi) -> None:
        self.script.append((as_fraction(lo), as_fraction(hi)))

    def _produce(self, stage):
        if stage < len(self.script):
            return self.script[stage]
        raise ScriptExhausted(f"only {len(self.script)} stages known so far")


class FunctionCut(CutStream):
    """Stream backed by a function ``stage -> (lo, hi)``."""

    def __init__(self, fn: Callable[[int], tuple], kind: CutKind = CutKind.STRICT, source: str = "generator"):
        super().__init__(kind)
        self._fn = fn
        self.source = source

    def _produce(self, stage):
        lo, hi = self._fn(stage)
        return as_fraction(lo), as_fraction(hi)


class ShiftedCut(CutStream):
    """``base + q`` where ``q`` is rational."""

    def __init__(self, base: CutStream, q, lag: int = 0):
        super().__init__(base.kind)
        self.base = base
        self.offset = as_fraction(q)
        self.lag = lag

    def _produce(self, stage):
        iv = self.base.interval(stage + self.lag)
        return iv.lo + self.offset, iv.hi + self.offset


def cut_of_rational(q, kind: CutKind) -> RationalCut:
    return RationalCut(q, kind)


def refine(c: CutStream, stages: int) -> RationalInterval:
    return c.interval(stages)


def realize_approx(c: CutStream, eps, budget: int = 1024) -> Fraction:
    """Midpoint of the first interval narrower than ``eps``."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    for s in range(budget):
        iv = c.interval(s)
        if iv.width < eps:
            return iv.midpoint
    raise BudgetExceeded(f"no interval narrower than {eps} within {budget} stages")


@dataclass(frozen=True)
class Separated:
    """``witness`` lies between the two stage intervals; ``first_below`` says which is lower."""

    witness: Fraction
    first_below: bool


def distinct_at(c1: CutStream, c2: CutStream, stage: int) -> Separated | None:
    """``Separated`` when the stage intervals are disjoint, else ``None``."""
    sep = c1.interval(stage).separator(c2.interval(stage))
    if sep is None:
        return None
    witness, sign = sep
    return Separated(witness, sign < 0)


def first_separation(c1: CutStream, c2: CutStream, budget: int) -> int | None:
    for s in range(budget):
        if distinct_at(c1, c2, s):
            return s
    return None


def intervals_from_json_lines(lines: Iterable[str]) -> list[tuple[int, RationalInterval]]:
    out = []
    for line in lines:
        rec = json.loads(line)
        kind = CutKind(rec["kind"])
        out.append((rec["stage"], RationalInterval(Fraction(rec["lo"]), Fraction(rec["hi"]), kind.bracket)))
    return out
