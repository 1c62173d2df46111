"""Append-only stage traces serialized as JSON lines."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from ..exactnum.interval import fmt_q

SCHEMA = 1


class TraceFormatError(ValueError):
    """Unreadable, truncated or unsupported trace file."""


def _plain(v):
    if isinstance(v, Fraction):
        return fmt_q(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


class Trace:
    """Records are dicts with at least ``stage`` and ``event``; stages never decrease."""

    def __init__(self, kind: str):
        self.kind = kind
        self.records: list[dict] = []

    def add(self, stage: int, event: str, **fields) -> dict:
        if self.records and stage < self.records[-1]["stage"]:
            raise ValueError(f"stage {stage} recorded after stage {self.records[-1]['stage']}")
        rec = {"stage": stage, "event": event}
        rec.update({k: _plain(v) for k, v in fields.items()})
        self.records.append(rec)
        return rec

    def __iter__(self) -> Iterator[dict]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def select(self, event: str) -> list[dict]:
        return [r for r in self.records if r["event"] == event]

    def lines(self) -> list[str]:
        head = json.dumps({"schema": SCHEMA, "kind": self.kind}, sort_keys=True)
        foot = json.dumps({"end": len(self.records)})
        return [head] + [json.dumps(r, sort_keys=True) for r in self.records] + [foot]

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.text())

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Trace":
        """Parse a file written by :meth:`write`; the footer guards against truncation."""
        rows = []
        for no, line in enumerate(lines, 1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"line {no}: {exc.msg}") from None
        if not rows or not isinstance(rows[0], dict) or "schema" not in rows[0]:
            raise TraceFormatError("missing trace header")
        if rows[0]["schema"] != SCHEMA:
            raise TraceFormatError(f"unsupported trace schema {rows[0]['schema']!r}")
        foot = rows[-1] if len(rows) > 1 else {}
        if set(foot) != {"end"} or foot["end"] != len(rows) - 2:
            raise TraceFormatError("trace is truncated (footer missing or record count wrong)")
        t = cls(rows[0].get("kind", "?"))
        for r in rows[1:-1]:
            if not isinstance(r, dict) or "stage" not in r or "event" not in r:
                raise TraceFormatError(f"malformed record {r!r}")
            t.records.append(r)
        return t

    @classmethod
    def read(cls, path) -> "Trace":
        return cls.from_lines(Path(path).read_text().splitlines())
