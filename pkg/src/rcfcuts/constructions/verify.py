"""Offline replay of a trace against the invariants of its construction."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exactnum.interval import RationalInterval, parse_q
from ..exactnum.sturm import count_roots
from .low import nesting_violations, permitting_violations
from .nonarch_tree import order_violations, placement_violations
from .prime_copy import prime_violations
from .sigma2 import listing_poly
from .trace import Trace


@dataclass
class VerifyReport:
    kind: str
    checks: dict[str, int] = field(default_factory=dict)  # check name -> records examined
    failure: str | None = None
    record: dict | None = None
    line: int | None = None  # 1-based line in the trace file (header is line 1)

    @property
    def ok(self) -> bool:
        return self.failure is None

    def text(self) -> str:
        head = f"{self.kind}: " + ", ".join(f"{k} ({n})" for k, n in self.checks.items())
        if self.ok:
            return head + "\nPASS"
        return head + f"\nFAIL {self.failure} at line {self.line}: {self.record}"


class _Fail(Exception):
    def __init__(self, name: str, rec: dict):
        super().__init__(name)
        self.name, self.rec = name, rec


def _stages(trace: Trace, rep: VerifyReport) -> None:
    last = None
    for r in trace:
        if last is not None and r["stage"] < last:
            raise _Fail("stage order", r)
        last = r["stage"]
    rep.checks["stage order"] = len(trace)


def _open(lo, hi) -> RationalInterval:
    return RationalInterval(parse_q(lo), parse_q(hi))


def _sigma2(trace: Trace, rep: VerifyReport) -> None:
    current: dict[int, RationalInterval] = {}
    discarded: dict[int, list[int]] = {}
    n_checked = 0
    for r in trace:
        if r["event"] == "discard":
            discarded.setdefault(r["e"], []).append(r["n"])
            continue
        if r["event"] != "interval":
            continue
        e, iv = r["e"], _open(r["lo"], r["hi"])
        if not iv.lo < iv.hi:
            raise _Fail("empty interval", r)
        prev = current.get(e)
        if prev is not None and (iv.lo < prev.lo or iv.hi > prev.hi):
            raise _Fail("interval nesting", r)
        if count_roots(listing_poly(r["n"]), iv) == 0:
            raise _Fail("root of held polynomial", r)
        current[e] = iv
        n_checked += 1
    rep.checks["interval nesting"] = rep.checks["root of held polynomial"] = n_checked
    last = {r["e"]: r for r in trace.select("interval")}
    for e, ns in discarded.items():
        for n in ns:
            if count_roots(listing_poly(n), current[e]) != 0:
                raise _Fail(f"final interval excludes roots of discarded p_{n}", last[e])
    rep.checks["discarded roots excluded"] = sum(len(v) for v in discarded.values())


def _low(trace: Trace, rep: VerifyReport) -> None:
    acts = trace.select("active")
    for r in acts:
        if not parse_q(r["a"]) < parse_q(r["b"]):
            raise _Fail("empty interval", r)
    for name, bad in (("permitting", permitting_violations(trace)), ("node nesting", nesting_violations(trace))):
        if bad:
            raise _Fail(name, bad[0])
        rep.checks[name] = len(acts)


def _nonarch(trace: Trace, rep: VerifyReport) -> None:
    ranks = trace.select("ranks")
    for r in ranks:
        for lo, hi in r["intervals"].values():
            if not parse_q(lo) < parse_q(hi):
                raise _Fail("empty interval", r)
    for r in trace.select("redefine"):
        if not parse_q(r["a"]) < parse_q(r["b"]) < parse_q(r["b_old"]):
            raise _Fail("redefinition moves b down", r)
    bad = order_violations(trace)
    if bad:
        raise _Fail("tree/field order", bad[0])
    rep.checks["tree/field order"] = len(ranks)
    bad = placement_violations(trace)
    if bad:
        raise _Fail("integer placement", bad[0])
    rep.checks["integer placement"] = len(trace.select("placement"))


def _prime(trace: Trace, rep: VerifyReport) -> None:
    bad = prime_violations(trace)
    if bad:
        raise _Fail(*bad[0])
    rep.checks["replay"] = len(trace)
    rep.checks["derived order equals limit"] = rep.checks["redefinitions bounded by flips"] = 1


_SUITES = {"sigma2": _sigma2, "low": _low, "nonarch": _nonarch, "prime": _prime}


def verify_trace(trace: Trace) -> VerifyReport:
    """Run every check for the trace's kind, stopping at the first failing record."""
    rep = VerifyReport(trace.kind)
    suite = _SUITES.get(trace.kind)
    if suite is None:
        raise ValueError(f"no verifier for trace kind {trace.kind!r}")
    try:
        _stages(trace, rep)
        suite(trace, rep)
    except _Fail as f:
        rep.failure, rep.record = f.name, f.rec
        rep.line = next((i + 2 for i, r in enumerate(trace.records) if r is f.rec), None)
    return rep
