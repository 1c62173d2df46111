"""Extracting cuts of a transcendence basis from an enumeration of cuts.

Each output position ``C_j`` is a guided cut: its stage-``t`` interval is the
interval of some input cut (its guide) at stage ``t + lag``, shifted by a
rational offset. When the dependence guesses change, guides move between
positions. A left-shift hands position ``j`` the next guide with an offset
that keeps the shifted interval inside ``C_j``'s current interval, so the
position's interval sequence stays nested. A right-shift restarts position
``j`` from its new guide's raw intervals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..cuts import BudgetExceeded, CutStream, NestingViolation
from ..enumeration import CutEnumeration
from ..exactnum.interval import RationalInterval, fmt_q
from ..exactnum.qorder import first_in

DEPENDENT = "dependent"
INDEPENDENT = "independent"


class DependenceApproximator:
    """Scripted guesses ``g(n, s)`` for "cut ``n`` depends on the cuts before it".

    ``script`` maps ``n`` to ``[(stage, guess), ...]``; the guess at stage
    ``s`` is the last entry with ``stage <= s``. Unlisted cuts are
    independent.
    """

    def __init__(self, script: dict | None = None):
        self.script: dict[int, list[tuple[int, str]]] = {}
        for n, entries in (script or {}).items():
            rows = sorted((int(s), str(g)) for s, g in entries)
            for _, g in rows:
                if g not in (DEPENDENT, INDEPENDENT):
                    raise ValueError(f"unknown guess {g!r}")
            self.script[int(n)] = rows

    @classmethod
    def from_json(cls, d: dict) -> "DependenceApproximator":
        return cls({int(k): v for k, v in d.items()})

    def to_json(self) -> dict:
        return {str(n): [[s, g] for s, g in rows] for n, rows in sorted(self.script.items())}

    def guess(self, n: int, s: int) -> str:
        out = INDEPENDENT
        for stage, g in self.script.get(n, ()):
            if stage <= s:
                out = g
        return out

    def independent(self, n: int, s: int) -> bool:
        return self.guess(n, s) == INDEPENDENT


@dataclass
class Segment:
    start: int
    guide: int
    offset: Fraction
    lag: int


class GuidedCut(CutStream):
    """One epoch of an output position: a piecewise-guided nested stream."""

    source = "guided"

    def __init__(self, inputs: CutEnumeration, guide: int, start: int):
        super().__init__(inputs.stream(guide).kind)
        self.inputs = inputs
        self.segments = [Segment(0, guide, Fraction(0), 0)]
        self.opened_at = start

    @property
    def guide(self) -> int:
        return self.segments[-1].guide

    @property
    def offset(self) -> Fraction:
        return self.segments[-1].offset

    def reguide(self, stage: int, guide: int, offset: Fraction, lag: int) -> None:
        self.segments.append(Segment(stage, guide, offset, lag))

    def _produce(self, stage):
        seg = next(g for g in reversed(self.segments) if g.start <= stage)
        iv = self.inputs.stream(seg.guide).interval(stage + seg.lag)
        return iv.lo + seg.offset, iv.hi + seg.offset


@dataclass
class ShiftEvent:
    stage: int
    event: str
    position: int
    guide: int | None = None
    offset: Fraction | None = None
    lag: int | None = None
    target: RationalInterval | None = None
    shifted: RationalInterval | None = None

    @property
    def safe(self) -> bool | None:
        if self.target is None:
            return None
        return self.target.contains_interval(self.shifted)

    def to_json(self) -> str:
        d = {"stage": self.stage, "event": self.event, "position": self.position, "guide": self.guide}
        if self.offset is not None:
            d.update(offset=fmt_q(self.offset), lag=self.lag)
        if self.target is not None:
            d.update(target=str(self.target), shifted=str(self.shifted), safe=self.safe)
        return json.dumps(d, sort_keys=True)


@dataclass
class BasisExtraction:
    inputs: CutEnumeration
    stages: int
    positions: list[GuidedCut] = field(default_factory=list)
    epochs: list[list[GuidedCut]] = field(default_factory=list)
    events: list[ShiftEvent] = field(default_factory=list)

    @property
    def output(self) -> CutEnumeration:
        return CutEnumeration(list(self.positions))

    def guides(self) -> list[int]:
        return [c.guide for c in self.positions]

    def count(self, event: str) -> int:
        return sum(1 for e in self.events if e.event == event)

    def log_lines(self) -> list[str]:
        return [e.to_json() for e in self.events]


def _fit(inputs: CutEnumeration, guide: int, target: RationalInterval, stage: int,
         budget: int) -> tuple[Fraction, int, RationalInterval]:
    """Offset and lag placing the guide's shifted interval strictly inside ``target``."""
    src = inputs.stream(guide)
    for lag in range(budget):
        iv = src.interval(stage + lag)
        if iv.width < target.width:
            q = first_in(RationalInterval(target.lo - iv.lo, target.hi - iv.hi))
            return q, lag, iv.shift(q)
    raise BudgetExceeded(f"input {guide} never narrowed below {target} within {budget} stages")


def extract_basis(cuts: CutEnumeration, dep: DependenceApproximator, stages: int = 64,
                  budget: int = 256) -> BasisExtraction:
    """Run the guided-cut process for ``stages`` stages.

    At stage ``s`` the inputs ``0..s`` are considered and the guessed basis
    is the list of those currently guessed independent. Positions are
    brought in line with it one difference at a time.
    """
    out = BasisExtraction(cuts, stages)
    pos = out.positions

    def open_fresh(j: int, guide: int, s: int, event: str) -> None:
        c = GuidedCut(cuts, guide, s)
        if j < len(pos):
            pos[j] = c
            out.epochs[j].append(c)
        else:
            pos.append(c)
            out.epochs.append([c])
        out.events.append(ShiftEvent(s, event, j, guide))

    def reguide(j: int, guide: int, s: int, event: str) -> None:
        c = pos[j]
        target = c.interval(max(s - 1, 0))
        start = c.stages_pulled
        q, lag, shifted = _fit(cuts, guide, target, start, budget)
        if not target.contains_interval(shifted.with_kind(c.kind.bracket)):
            raise NestingViolation(f"shift of input {guide} by {fmt_q(q)} leaves {target}")
        c.reguide(start, guide, q, lag)
        out.events.append(ShiftEvent(s, event, j, guide, q, lag, target, shifted))

    for s in range(stages):
        considered = cuts.indices_at(s)
        wanted = [n for n in considered if dep.independent(n, s)]
        while True:
            have = [c.guide for c in pos]
            if have == wanted:
                break
            j = next((i for i, (a, b) in enumerate(zip(have, wanted)) if a != b), min(len(have), len(wanted)))
            if j == len(have):
                open_fresh(j, wanted[j], s, "open")
            elif have[j] not in wanted:
                # left-shift: every later guide moves one position down
                for k in range(j, len(have) - 1):
                    reguide(k, have[k + 1], s, "left-shift")
                last = len(have) - 1
                spare = [n for n in wanted if n > have[-1]]
                if spare:
                    reguide(last, spare[0], s, "left-shift")
                else:
                    pos.pop()
                    out.events.append(ShiftEvent(s, "retire", last, have[last]))
            else:
                # right-shift: restart position j, later guides move one position up
                for k in range(len(have) - 1, j, -1):
                    reguide(k, have[k - 1], s, "carry")
                open_fresh(len(have), have[-1], s, "carry-open")
                open_fresh(j, wanted[j], s, "right-shift")
        for c in pos:
            c.interval(s)
    return out
