"""Finite-injury construction of a prime-nonstandard field from an order approximation.

Every point ``a`` of the order gets a positive infinite element ``d_a``. When
the approximation swaps two points, the one with lower priority (larger
index in the point list) is demoted: its current element is redefined as a
large power of the other's, which merges the two multiplicative classes,
and a fresh element with a new coordinate of the value group takes over as
its ``d``, placed on the side the new order asks for.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from ..cuts import ScriptExhausted
from .series import DerivedOrder, NonArchElement, ValueGroup, derived_order


@dataclass(frozen=True)
class Flip:
    stage: int
    pair: tuple[str, str]
    order: tuple[str, str]  # the pair's relative order from this stage on, least first


class OrderApproximation:
    """Stage-indexed finite linear orders on a fixed point set.

    ``L_0`` is ``points`` in the given order; each flip sets the relative
    order of an adjacent pair. Flips are replayed once at construction to
    reject non-adjacent or vacuous swaps.
    """

    def __init__(self, points: Sequence[str], flips: Sequence[Flip] = (), horizon: int | None = None):
        if len(set(points)) != len(points):
            raise ValueError("duplicate points")
        self.points = list(points)
        self.flips = sorted(flips, key=lambda f: f.stage)
        self.horizon = horizon
        order = list(self.points)
        for f in self.flips:
            order = _apply(order, f)

    @classmethod
    def from_json(cls, d: dict) -> "OrderApproximation":
        flips = [Flip(int(f["stage"]), tuple(f["pair"]), tuple(f["order"])) for f in d.get("flips", [])]
        return cls([str(p) for p in d["points"]], flips, d.get("horizon"))

    def to_json(self) -> dict:
        d = {"points": self.points,
             "flips": [{"stage": f.stage, "pair": list(f.pair), "order": list(f.order)} for f in self.flips]}
        if self.horizon is not None:
            d["horizon"] = self.horizon
        return d

    def flips_at(self, stage: int) -> list[Flip]:
        return [f for f in self.flips if f.stage == stage]

    def order_at(self, stage: int) -> list[str]:
        order = list(self.points)
        for f in self.flips:
            if f.stage <= stage:
                order = _apply(order, f)
        return order

    def limit(self) -> list[str]:
        return self.order_at(self.flips[-1].stage if self.flips else 0)

    def flip_count(self, point: str) -> int:
        return sum(1 for f in self.flips if point in f.pair)


def _apply(order: list[str], f: Flip) -> list[str]:
    a, b = f.order
    if set(f.pair) != {a, b} or a == b:
        raise ValueError(f"flip {f} names an inconsistent pair")
    i, j = order.index(a), order.index(b)
    if abs(i - j) != 1:
        raise ValueError(f"flip at stage {f.stage} swaps non-adjacent points {a}, {b} in {order}")
    if i < j:
        raise ValueError(f"flip at stage {f.stage} keeps {a} < {b}; nothing to swap")
    out = list(order)
    out[i], out[j] = out[j], out[i]
    return out


@dataclass
class Node:
    """One field element: a fresh coordinate or a power of another node."""

    ident: int
    point: str
    coordinate: str | None
    parent: int | None = None
    power: int = 1
    born: int = 0


@dataclass
class PrimeCopy:
    approx: OrderApproximation
    group: ValueGroup
    nodes: list[Node] = field(default_factory=list)
    handle: dict[str, int] = field(default_factory=dict)
    redefinitions: dict[str, int] = field(default_factory=dict)
    trace: list[dict] = field(default_factory=list)
    stages: int = 0

    def value(self, ident: int) -> NonArchElement:
        node = self.nodes[ident]
        if node.parent is None:
            return self.group.d(node.coordinate)
        return self.value(node.parent) ** node.power

    def d(self, point: str) -> NonArchElement:
        return self.value(self.handle[point])

    def root(self, ident: int) -> int:
        while self.nodes[ident].parent is not None:
            ident = self.nodes[ident].parent
        return ident

    def final_order(self) -> DerivedOrder:
        pts = list(self.approx.points)
        return derived_order([self.d(p) for p in pts], pts)

    def fragment_order(self) -> DerivedOrder:
        """Derived order over every node ever created, labelled by point."""
        return derived_order([self.value(n.ident) for n in self.nodes], [n.point for n in self.nodes])

    def trace_lines(self) -> list[str]:
        return [json.dumps(r, sort_keys=True) for r in self.trace]

    def dump(self) -> str:
        lines = []
        for n in self.nodes:
            how = f"t^-{n.coordinate}" if n.parent is None else f"node{n.parent}^{n.power}"
            lines.append(f"node{n.ident} point={n.point} born={n.born} value={how}")
        return "\n".join(lines)


def build_prime_copy(approx: OrderApproximation, stages: int) -> PrimeCopy:
    if approx.horizon is not None and stages > approx.horizon:
        raise ScriptExhausted(f"approximation scripted to stage {approx.horizon}, asked for {stages}")
    group = ValueGroup()
    out = PrimeCopy(approx, group)
    priority = {p: i for i, p in enumerate(approx.points)}

    def fresh(point: str, stage: int) -> int:
        ident = len(out.nodes)
        coord = f"{point}#{ident}"
        out.nodes.append(Node(ident, point, coord, born=stage))
        out.handle[point] = ident
        return ident

    for p in approx.points:
        ident = fresh(p, 0)
        group.append(out.nodes[ident].coordinate)
        out.redefinitions[p] = 0
        out.trace.append({"stage": 0, "event": "init", "point": p, "node": ident,
                          "coordinate": out.nodes[ident].coordinate})

    for s in range(stages):
        for f in approx.flips_at(s):
            lo, hi = f.order
            keep, demoted = sorted(f.pair, key=priority.__getitem__)
            old = out.handle[demoted]
            n = s + 2
            out.nodes[old].parent = out.handle[keep]
            out.nodes[old].power = n
            out.redefinitions[demoted] += 1
            ident = fresh(demoted, s)
            anchor = out.nodes[out.handle[keep]].coordinate
            group.insert_next_to(out.nodes[ident].coordinate, anchor, before=(demoted == lo))
            out.trace.append({"stage": s, "event": "demote", "point": demoted, "node": old,
                              "into": keep, "power": n})
            out.trace.append({"stage": s, "event": "fresh", "point": demoted, "node": ident,
                              "coordinate": out.nodes[ident].coordinate,
                              "side": "left" if demoted == lo else "right", "of": keep})
        out.stages = s + 1
    return out
