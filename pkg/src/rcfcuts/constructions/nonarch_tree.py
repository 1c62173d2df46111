"""Stage simulator for the 0'' tree construction of a nonarchimedean field.

Nodes are strings over the outcomes ``inf`` and ``fin``. The node at level
``e`` watches ``W_e`` and owns an element ``y`` whose cut is approximated by
``(a, b)``; ``x = b - y`` is kept between the infinitesimals and the
standard positives until a new integer ``n`` with ``1/n < x`` settles it.

The fragment is modeled concretely in the nonarch series field: a live
``x_{α,s}`` is ``eps(label)`` for a label of its own, labels ordered so that
``x_α < x_β`` exactly when ``α ≺ β``, and ``y_α = b_α - x_α``. When ``x``
is made standard the model of ``y`` is re-anchored at the node's new right
end point, which leaves the old ``x`` a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..exactnum.interval import Box, Bracket, RationalInterval
from ..exactnum.poly import eval_box
from ..exactnum.polyenum import iter_polys
from ..exactnum.qorder import first_in
from ..nonarch.series import Kind, NonArchElement, ValueGroup, classify, na_compare
from .script import CeScript
from .trace import Trace

INF, FIN = "inf", "fin"
AVOID_BUDGET = 32

Node = tuple[str, ...]


def prec_key(node: Iterable[str]) -> tuple:
    """Sort key of the tree order: ``α⌢inf ≺ α ≺ α⌢fin``."""
    return tuple(0 if o == INF else 2 for o in node) + (1,)


def precedes(a: Node, b: Node) -> bool:
    return prec_key(a) < prec_key(b)


def node_name(node: Node) -> str:
    return "λ" if not node else "/".join(node)


def parse_node(name: str) -> Node:
    return () if name == "λ" else tuple(name.split("/"))


@dataclass
class NodeState:
    node: Node
    y_born: int
    y_anchor: Fraction          # y = y_anchor - eps(label)
    label: str
    a: Fraction | None = None
    b: Fraction | None = None
    initialized: bool = False   # since the last stage it was eligible
    last_eligible: int | None = None
    consulted: int = 0          # stage of the W approximation read at the last eligibility
    epochs: int = 0
    old_b: list[Fraction] = field(default_factory=list)

    @property
    def x_defined(self) -> bool:
        return self.b is not None


class Fragment:
    """The rationals adjoined so far, plus the value group of live x classes."""

    def __init__(self):
        self.group = ValueGroup()
        self.rationals: list[Fraction] = []
        self._set: set[Fraction] = set()
        self.labels: dict[str, Node] = {}

    def adjoin(self, q) -> bool:
        q = Fraction(q)
        if q in self._set:
            return False
        self._set.add(q)
        self.rationals.append(q)
        return True

    def __contains__(self, q) -> bool:
        return Fraction(q) in self._set

    def largest_integer(self) -> int:
        return max(int(q) for q in self.rationals if q.denominator == 1)

    def below(self, q: Fraction) -> Fraction | None:
        return max((r for r in self.rationals if r < q), default=None)

    def at_or_above(self, q: Fraction) -> Fraction | None:
        return min((r for r in self.rationals if r >= q), default=None)

    def new_label(self, node: Node, stage: int, tag: str) -> str:
        label = f"{tag}:{node_name(node)}@{stage}"
        k = prec_key(node)
        # L lists least significant first; eps of a more significant label is smaller
        idx = sum(1 for lab in self.group.order if prec_key(self.labels[lab]) > k)
        self.group.insert_at(label, idx)
        self.labels[label] = node
        return label

    def retire(self, label: str) -> None:
        self.group.retire(label)
        del self.labels[label]

    def const(self, q) -> NonArchElement:
        return self.group.const(Fraction(q))

    def dovetail(self, k: int) -> tuple[str, Fraction | None]:
        """The ``k``-th closure step over the rationals: sum, product or reciprocal."""
        i, j = _unpair(k // 3)
        n = len(self.rationals)
        p, q = self.rationals[i % n], self.rationals[j % n]
        op = ("add", "mul", "inv")[k % 3]
        if op == "add":
            return op, p + q
        if op == "mul":
            return op, p * q
        return op, (1 / p if p else None)


def _unpair(k: int) -> tuple[int, int]:
    w = (math.isqrt(8 * k + 1) - 1) // 2
    j = k - w * (w + 1) // 2
    return w - j, j


@dataclass
class NonarchTreeState:
    nodes: dict[Node, NodeState] = field(default_factory=dict)
    eligible: dict[Node, list[int]] = field(default_factory=dict)
    active: dict[Node, list[int]] = field(default_factory=dict)
    initializations: int = 0
    stage: int = 0

    def y(self, frag: Fragment, node: Node) -> NonArchElement:
        st = self.nodes[node]
        return frag.const(st.y_anchor) - frag.group.eps(st.label)

    def x(self, frag: Fragment, node: Node) -> NonArchElement:
        st = self.nodes[node]
        return frag.const(st.b) - self.y(frag, node)

    def defined_x(self) -> list[Node]:
        return sorted((n for n, st in self.nodes.items() if st.x_defined), key=prec_key)


def _x_ranks(state: NonarchTreeState, frag: Fragment) -> dict[str, int]:
    """Rank of each defined x in the field order, computed by series comparison."""
    import functools

    nodes = state.defined_x()
    vals = {n: state.x(frag, n) for n in nodes}
    order = sorted(nodes, key=functools.cmp_to_key(lambda p, q: na_compare(vals[p], vals[q])))
    return {node_name(n): i for i, n in enumerate(order)}


def _avoid_left(frag_boxes: list[RationalInterval], lo: Fraction, b: Fraction, s: int,
                budget: int) -> tuple[Fraction, list[str]]:
    """Left end point in ``[lo, b)`` so that ``(a, b)`` holds no root of the first ``s`` polynomials.

    Polynomials use ``X0..X_{k-1}`` for the ``y`` of the ∞-predecessors, boxed by
    their current intervals, and ``X_k`` as the free variable.
    """
    k = len(frag_boxes)
    prefix = Box(frag_boxes)
    a = lo
    escapes = []
    taken = 0
    for r in iter_polys(k):
        if taken >= s:
            break
        if r.degree(k) == 0:
            continue
        taken += 1
        cand, width = a, b - a
        for _ in range(budget):
            if not eval_box(r, Box(tuple(prefix) + (RationalInterval(cand, b),))).contains(0):
                break
            width /= 2
            cand = b - width
        else:
            escapes.append(str(r))
            continue
        # any sub-interval of an excluded box stays excluded; keep the end point simple
        a = first_in(RationalInterval(cand, b, Bracket.HALF_OPEN_LEFT))
    return a, escapes


def run_nonarch_tree(script: CeScript, stages: int | None = None, depth: int | None = None,
                     avoid_budget: int = AVOID_BUDGET) -> tuple[Trace, NonarchTreeState, Fragment]:
    stages = script.horizon if stages is None else stages
    script.check(stages)
    depth = depth if depth is not None else script.extra.get("depth")
    trace = Trace("nonarch")
    st = NonarchTreeState()
    frag = Fragment()
    for q in (0, 1, 2):
        frag.adjoin(q)
    root: Node = ()
    st.nodes[root] = NodeState(root, 0, Fraction(2), frag.new_label(root, 0, "x"), Fraction(1), Fraction(2))
    trace.add(0, "fresh", node="λ", a=1, b=2, label=st.nodes[root].label)

    for s in range(stages):
        s1 = s + 1
        op, q = frag.dovetail(s)
        if q is not None and frag.adjoin(q):
            trace.add(s1, "element", op=op, value=q)

        # substages along the eligible chain
        actives: list[Node] = []
        node: Node = root
        levels = s if depth is None else min(s, int(depth))
        for e in range(levels):
            st.eligible.setdefault(node, []).append(s1)
            ns = st.nodes.get(node)
            if ns is None:
                a = frag.largest_integer() + 1
                frag.adjoin(a)
                frag.adjoin(a + 1)
                ns = st.nodes[node] = NodeState(node, s1, Fraction(a + 1), frag.new_label(node, s1, "x"),
                                                Fraction(a), Fraction(a + 1))
                trace.add(s1, "fresh", node=node_name(node), a=ns.a, b=ns.b, label=ns.label)
                outcome = FIN
            elif ns.initialized:
                a = frag.below(ns.y_anchor)
                nxt = frag.at_or_above(ns.y_anchor)
                b = first_in(RationalInterval(a, nxt))
                frag.adjoin(b)
                frag.retire(ns.label)
                ns.a, ns.b, ns.y_anchor = a, b, b
                ns.label = frag.new_label(node, s1, "x")
                ns.initialized = False
                ns.epochs += 1
                trace.add(s1, "reanchor", node=node_name(node), a=a, b=b, label=ns.label)
                outcome = FIN
            else:
                changed = script.W_at(e, s) != script.W_at(e, ns.consulted)
                outcome = INF if changed else FIN
                if changed:
                    actives.append(node)
                    st.active.setdefault(node, []).append(s1)
            ns.last_eligible = s1
            ns.consulted = s
            trace.add(s1, "eligible", node=node_name(node), level=e, outcome=outcome,
                      active=outcome == INF and node in actives)
            node = node + (outcome,)

        # collective step
        affected = [n for n in st.defined_x() if any(not precedes(n, a) for a in actives)]
        n_int = frag.largest_integer() + 1
        if affected:
            gap = min(st.nodes[n].b - st.nodes[n].a for n in affected)
            # 1/n below half of every affected interval keeps the new b well inside it
            n_int = max(n_int, math.floor(2 / gap) + 1)
        frag.adjoin(n_int)
        inv_n = frag.const(Fraction(1, n_int))
        old_x = {n: (st.nodes[n].b, st.x(frag, n)) for n in st.defined_x()}
        for n in sorted(affected, key=len):
            ns = st.nodes[n]
            b_old = ns.b
            c = first_in(RationalInterval(ns.a, b_old - Fraction(1, n_int)))
            frag.retire(ns.label)
            ns.old_b.append(b_old)
            if n in actives:
                frag.adjoin(c)
                boxes = [RationalInterval(st.nodes[n[:i]].a, st.nodes[n[:i]].b)
                         for i in range(len(n)) if n[i] == INF]
                a_new, escapes = _avoid_left(boxes, ns.a, c, s, avoid_budget)
                frag.adjoin(a_new)
                ns.a, ns.b, ns.y_anchor = a_new, c, c
                ns.label = frag.new_label(n, s1, "x")
                ns.epochs += 1
                for r in escapes:
                    trace.add(s1, "escape", node=node_name(n), poly=r)
                trace.add(s1, "redefine", node=node_name(n), b_old=b_old, a=a_new, b=c, label=ns.label)
            else:
                ns.y_anchor = c
                ns.label = frag.new_label(n, s1, "hidden")
                ns.a = ns.b = None
                ns.initialized = True
                st.initializations += 1
                trace.add(s1, "initialize", node=node_name(n), b_old=b_old, by=[node_name(a) for a in actives])
        for n in st.defined_x():
            if n in affected:
                continue
            ns = st.nodes[n]
            ns.a = max(r for r in frag.rationals if ns.a <= r < ns.b)
        units, infinitesimals, above = [], [], []
        for n, (b_old, _) in old_x.items():
            xv = frag.const(b_old) - st.y(frag, n)
            (units if classify(xv) is Kind.UNIT else infinitesimals).append(node_name(n))
            if na_compare(inv_n, xv) < 0:
                above.append(node_name(n))
        trace.add(s1, "placement", n=n_int, active=[node_name(a) for a in actives],
                  unit=sorted(units), infinitesimal=sorted(infinitesimals), above=sorted(above))
        trace.add(s1, "ranks", ranks=_x_ranks(st, frag),
                  intervals={node_name(n): [st.nodes[n].a, st.nodes[n].b] for n in st.defined_x()})
        st.stage = s1
    return trace, st, frag


@dataclass(frozen=True)
class PathEntry:
    level: int
    node: str
    flag: str  # "stable" or "horizon-limited"


def true_path(trace: Trace, horizon: int | None = None) -> list[PathEntry]:
    """Per level, the ≺-leftmost child of the previous path node eligible recurrently late.

    "Recurrently" means at two or more stages in the final third of the
    horizon. The flag is "horizon-limited" when some node further left at
    that level was eligible in the final third at all, or when the choice
    rests on the bare two-stage minimum.
    """
    elig: dict[Node, list[int]] = {}
    for r in trace.select("eligible"):
        elig.setdefault(parse_node(r["node"]), []).append(r["stage"])
    if horizon is None:
        horizon = max((r["stage"] for r in trace), default=0)
    cut = horizon - horizon // 3
    late = {n: [t for t in ts if t > cut] for n, ts in elig.items()}
    out: list[PathEntry] = []
    current: Node = ()
    level = 0
    while True:
        if level == 0:
            cands = [()] if () in late else []
        else:
            cands = sorted((n for n in late if len(n) == level and n[:-1] == current), key=prec_key)
        chosen = next((n for n in cands if len(late[n]) >= 2), None)
        if chosen is None:
            break
        left_seen = any(late[n] for n in cands if precedes(n, chosen))
        flag = "horizon-limited" if left_seen or len(late[chosen]) < 3 else "stable"
        out.append(PathEntry(level, node_name(chosen), flag))
        current = chosen
        level += 1
    return out


def order_violations(trace: Trace) -> list[dict]:
    """Rank records where the x order disagrees with the tree order."""
    bad = []
    for r in trace.select("ranks"):
        names = sorted(r["ranks"], key=lambda n: prec_key(parse_node(n)))
        if [r["ranks"][n] for n in names] != list(range(len(names))):
            bad.append(r)
    return bad


def placement_violations(trace: Trace) -> list[dict]:
    """Placement records whose units are not exactly the x's at or above an active node."""
    bad = []
    for r in trace.select("placement"):
        actives = [parse_node(a) for a in r["active"]]
        for name in r["unit"] + r["infinitesimal"]:
            want = any(not precedes(parse_node(name), a) for a in actives)
            if want != (name in r["unit"]):
                bad.append(r)
                break
    return bad
