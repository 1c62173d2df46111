"""Trace wrapper around the prime-copy builder so it shares the construct/verify pipeline."""

from __future__ import annotations

from ..nonarch.prime import OrderApproximation, PrimeCopy, build_prime_copy
from .trace import Trace


def run_prime(approx: OrderApproximation, stages: int | None = None) -> tuple[Trace, PrimeCopy]:
    if stages is None:
        stages = approx.horizon if approx.horizon is not None else max((f.stage for f in approx.flips), default=0) + 1
    copy = build_prime_copy(approx, stages)
    trace = Trace("prime")
    trace.add(0, "script", approximation=approx.to_json(), stages=stages)
    for r in copy.trace:
        trace.add(r["stage"], r["event"], **{k: v for k, v in r.items() if k not in ("stage", "event")})
    final = copy.final_order()
    trace.add(stages, "final", derived=final.labels, limit=approx.limit(),
              redefinitions=copy.redefinitions, flips={p: approx.flip_count(p) for p in approx.points})
    return trace, copy


def prime_violations(trace: Trace) -> list[tuple[str, dict]]:
    """Replay the embedded approximation and compare; returns (check, record) pairs."""
    bad = []
    head = trace.select("script")
    if not head:
        return [("embedded approximation", trace.records[0] if trace.records else {})]
    approx = OrderApproximation.from_json(head[0]["approximation"])
    replay, _ = run_prime(approx, head[0]["stages"])
    for got, want in zip(trace.records, replay.records):
        if got != want:
            bad.append(("replay", got))
            break
    if len(trace.records) != len(replay.records) and not bad:
        bad.append(("replay", trace.records[-1]))
    for r in trace.select("final"):
        if r["derived"] != r["limit"]:
            bad.append(("derived order equals limit", r))
        if any(r["redefinitions"][p] > r["flips"][p] for p in r["flips"]):
            bad.append(("redefinitions bounded by flips", r))
    return bad
