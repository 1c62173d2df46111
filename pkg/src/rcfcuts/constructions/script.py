"""Scripted computability data: finite stage-indexed approximations of c.e. sets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..cuts import ScriptExhausted


def _increments(rows) -> list[tuple[int, tuple]]:
    out = []
    for stage, elems in rows:
        row = (int(stage), tuple(int(x) for x in elems))
        if row[0] < 0 or any(x < 0 for x in row[1]):
            raise ValueError(f"negative stage or element in {[stage, elems]!r}")
        out.append(row)
    out.sort(key=lambda r: r[0])
    return out


@dataclass
class CeScript:
    """``W_e``, ``L`` and the chip schedule as lists of (stage, new elements).

    ``W_{e,s}`` is the union of the increments with stage ``<= s``, so the
    approximations are monotone by construction. Extra keys (``f``, ``S``,
    ``indices``, ...) are kept verbatim in ``extra``.
    """

    W: dict[int, list[tuple[int, tuple]]] = field(default_factory=dict)
    L: list[tuple[int, tuple]] = field(default_factory=list)
    chips: list[tuple[int, int]] = field(default_factory=list)
    horizon: int = 0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, d: dict) -> "CeScript":
        W = {int(e): _increments(rows) for e, rows in d.get("W", {}).items()}
        L = _increments(d.get("L", []))
        chips = sorted((int(s), int(r)) for s, r in d.get("chips", []))
        if any(s < 0 or r < 0 for s, r in chips):
            raise ValueError("chip stages and recipients must be naturals")
        if "horizon" not in d or int(d["horizon"]) < 1:
            raise ValueError("script needs a horizon >= 1")
        extra = {k: v for k, v in d.items() if k not in ("W", "L", "chips", "horizon")}
        return cls(W, L, chips, int(d["horizon"]), extra)

    @classmethod
    def load(cls, path) -> "CeScript":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        d = {
            "W": {str(e): [[s, list(x)] for s, x in rows] for e, rows in sorted(self.W.items())},
            "L": [[s, list(x)] for s, x in self.L],
            "chips": [[s, r] for s, r in self.chips],
            "horizon": self.horizon,
        }
        d.update(self.extra)
        return d

    def check(self, stage: int) -> None:
        if stage > self.horizon:
            raise ScriptExhausted(f"stage {stage} is beyond the script horizon {self.horizon}")

    def W_at(self, e: int, s: int) -> frozenset:
        self.check(s)
        return frozenset(x for st, xs in self.W.get(e, ()) for x in xs if st <= s)

    def L_at(self, s: int) -> frozenset:
        self.check(s)
        return frozenset(x for st, xs in self.L for x in xs if st <= s)

    def chips_at(self, s: int) -> list[int]:
        self.check(s)
        return [r for st, r in self.chips if st == s]

    def f(self, e: int) -> int:
        return int(self.extra.get("f", {}).get(str(e), e))
