"""Stage simulator for the permitting construction on the tree of guesses.

A node ``σ = (e_0, ..., e_m)`` works on cut ``C_m`` and guesses that
``S_{e_m}`` is the sequence its requirements must defeat. Every stage the
root is eligible; an eligible node that acts hands eligibility to the
child named by the chip rule. Moving a rational out of either side of a
cut needs permission from the enumeration of ``L``.

Script extras:

``S``
    ``{e: [cut_0, cut_1, ...]}`` where each cut is a list of
    ``[stage, lo, hi]`` rows; cut ``n`` of ``S_e`` is undefined (the guessed
    function diverges) until its first row.
``depth``
    optional cap on the number of tree levels simulated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exactnum.interval import Box, Bracket, RationalInterval, parse_q
from ..exactnum.poly import MultiPoly, eval_box
from ..exactnum.polyenum import poly_enumerate
from ..exactnum.qorder import first_in, q_at, q_index
from .script import CeScript
from .trace import Trace

Node = tuple[int, ...]


def requirement(k: int) -> tuple[str, int]:
    """The ``k``-th requirement of a node's list: N_0, P_0, N_1, P_1, ..."""
    return ("N" if k % 2 == 0 else "P"), k // 2


def cantor_pairs(n: int):
    """Pairs ``(i, j)`` with ``i, j < n`` in the order of the Cantor numbering."""
    for d in range(2 * n - 1):
        for i in range(max(0, d - n + 1), min(d, n - 1) + 1):
            yield i, d - i


def moved_index(a_old, b_old, a_new, b_new) -> int | None:
    """Least Q-index of a rational that leaves a side of the cut, or None."""
    best = None
    if a_new < a_old:
        best = q_index(first_in(RationalInterval(a_new, a_old, Bracket.HALF_OPEN_LEFT)))
    if b_new > b_old:
        i = q_index(first_in(RationalInterval(b_old, b_new, Bracket.HALF_OPEN_RIGHT)))
        best = i if best is None else min(best, i)
    return best


class SequenceTable:
    """Stage-indexed interval approximations to the cuts of each ``S_e``."""

    def __init__(self, raw: dict | None):
        self.cuts: dict[int, list[list[tuple[int, Fraction, Fraction]]]] = {}
        for e, cuts in (raw or {}).items():
            rows = []
            for cut in cuts:
                r = sorted((int(s), parse_q(str(lo)), parse_q(str(hi))) for s, lo, hi in cut)
                for s, lo, hi in r:
                    if not lo < hi:
                        raise ValueError(f"S_{e}: empty interval ({lo}, {hi}) at stage {s}")
                for (_, lo0, hi0), (_, lo1, hi1) in zip(r, r[1:]):
                    if lo1 < lo0 or hi1 > hi0:
                        raise ValueError(f"S_{e}: intervals must nest")
                rows.append(r)
            self.cuts[int(e)] = rows

    def interval(self, e: int, n: int, s: int) -> RationalInterval | None:
        cuts = self.cuts.get(e, [])
        if n >= len(cuts):
            return None
        found = None
        for st, lo, hi in cuts[n]:
            if st <= s:
                found = RationalInterval(lo, hi)
        return found

    def box(self, e: int, n: int, s: int) -> Box | None:
        ivs = [self.interval(e, k, s) for k in range(n)]
        return None if any(iv is None for iv in ivs) else Box(ivs)


@dataclass
class TreeState:
    a: dict[int, list[Fraction]] = field(default_factory=dict)   # a[m][s]
    b: dict[int, list[Fraction]] = field(default_factory=dict)
    last_active: dict[Node, int] = field(default_factory=dict)
    eligible: dict[Node, list[int]] = field(default_factory=dict)
    active: dict[Node, list[int]] = field(default_factory=dict)
    stage: int = 0

    def interval(self, m: int, s: int) -> RationalInterval:
        return RationalInterval(self.a[m][s], self.b[m][s])

    def redefinitions(self, trace: Trace) -> int:
        return sum(1 for r in trace.select("active") if r["update"] == "redefined")


def _left_of(x: Node, y: Node) -> bool:
    """``x`` lies strictly left of ``y`` at the same level."""
    return len(x) == len(y) and x < y


def run_low(script: CeScript, stages: int | None = None, depth: int | None = None) -> tuple[Trace, TreeState]:
    stages = script.horizon if stages is None else stages
    script.check(stages)
    depth = depth if depth is not None else script.extra.get("depth")
    table = SequenceTable(script.extra.get("S"))
    trace = Trace("low")
    st = TreeState()
    polys: list[MultiPoly] = []

    def p(i: int) -> MultiPoly:
        while len(polys) <= i:
            polys.append(poly_enumerate(len(polys)))
        return polys[i]

    levels = stages + 1 if depth is None else min(int(depth), stages + 1)
    for m in range(levels):
        st.a[m], st.b[m] = [Fraction(0)], [Fraction(1)]
    trace.add(0, "init", levels=levels, a=0, b=1)

    def s_prime(node: Node) -> int:
        """Last stage at which ``node`` or a node to its left was active."""
        return max((t for x, t in st.last_active.items() if x == node or _left_of(x, node)), default=0)

    def own_box(m: int, s1: int) -> Box:
        return Box(st.interval(k, s1) for k in range(m))

    def satisfied(kind, i, e, m, s, ab: RationalInterval) -> bool:
        q = p(i)
        if kind == "N":
            n = max(q.nvars - 1, 0)
            pre = table.box(e, n, s)
            if pre is None or q.is_constant():
                return True
            return not eval_box(q, Box(tuple(pre) + (ab,))).contains(0)
        if q.nvars > m + 1 or q.degree(m) == 0:
            return True
        return not eval_box(q, Box(tuple(own_box(m, s + 1)) + (ab,))).contains(0)

    for s in range(stages):
        s1 = s + 1
        for m in range(levels):
            st.a[m].append(st.a[m][s])
            st.b[m].append(st.b[m][s])
        for r in script.chips_at(s1):
            trace.add(s1, "chip", recipient=r)
        L_now = script.L_at(s1)
        # the root dispatches every stage
        prev_root = st.last_active.get((), 0)
        st.last_active[()] = s1
        child = _chip_child(script, -1, prev_root, s1)
        node = None if child is None else (child,)
        while node is not None:
            m = len(node) - 1
            if m > s or m >= levels:
                break
            e = node[-1]
            st.eligible.setdefault(node, []).append(s1)
            sp = s_prime(node)
            a_sp, b_sp = st.a[m][sp], st.b[m][sp]
            a_s, b_s = st.a[m][s], st.b[m][s]
            new_l = sorted(L_now - script.L_at(sp))
            permit = new_l[0] if new_l else None
            trace.add(s1, "eligible", node=list(node), level=m, e=e, s_prime=sp)
            pending = []
            for k in range(s):
                kind, i = requirement(k)
                ab = RationalInterval(a_s, b_s) if kind == "N" else RationalInterval(a_sp, b_sp)
                if not satisfied(kind, i, e, m, s, ab):
                    pending.append((k, kind, i))
            choice = None
            if pending:
                cands = _candidates(s, a_sp, b_sp, a_s, b_s, permit)
                for k, kind, i in pending:
                    for a, b in cands:
                        if satisfied(kind, i, e, m, s, RationalInterval(a, b)):
                            choice = (k, kind, i, a, b)
                            break
                    if choice:
                        break
                if choice is None:
                    st.a[m][s1], st.b[m][s1] = a_sp, b_sp
                    trace.add(s1, "inactive", node=list(node), level=m, e=e, s_prime=sp,
                              pending=[k for k, _, _ in pending], a=a_sp, b=b_sp,
                              update="revert" if (a_sp, b_sp) != (a_s, b_s) else "kept")
                    break
            else:
                choice = (None, None, None, a_s, b_s)
            k, kind, i, a, b = choice
            redefined = a < a_s or b > b_s
            st.a[m][s1], st.b[m][s1] = a, b
            prev_active = st.last_active.get(node, 0)
            st.last_active[node] = s1
            st.active.setdefault(node, []).append(s1)
            trace.add(s1, "active", node=list(node), level=m, e=e, s_prime=sp, req=k,
                      requirement=None if k is None else f"{kind}{i}", poly=None if k is None else str(p(i)),
                      a_prev=a_s, b_prev=b_s, a_sp=a_sp, b_sp=b_sp, a=a, b=b, permit=permit,
                      moved=moved_index(a_s, b_s, a, b),
                      update="redefined" if redefined else "refined")
            if m >= s:
                break
            child = _chip_child(script, e, prev_active, s1)
            node = None if child is None else node + (child,)
        st.stage = s1
    return trace, st


def _chip_child(script: CeScript, above: int, since: int, now: int) -> int | None:
    """Least recipient ``> above`` of a chip at a stage in ``(since, now]``."""
    got = [r for t in range(since + 1, now + 1) for r in script.chips_at(t) if r > above]
    return min(got) if got else None


def _candidates(s: int, a_sp, b_sp, a_s, b_s, permit: int | None) -> list[tuple[Fraction, Fraction]]:
    """Witness pairs from ``q_0..q_s`` passing containment and permitting, least first."""
    qs = [q_at(i) for i in range(s + 1)]
    out = []
    for i, j in cantor_pairs(s + 1):
        a, b = qs[i], qs[j]
        if not (a < b and a_sp <= a and b <= b_sp):
            continue
        if not _permitted(a_s, b_s, a, b, permit):
            continue
        out.append((a, b))
    return out


def _permitted(a_s, b_s, a, b, limit: int | None) -> bool:
    moved = moved_index(a_s, b_s, a, b)
    if moved is None:
        return True
    return limit is not None and moved >= limit


def permitting_violations(trace: Trace) -> list[dict]:
    """Redefinition records that move a rational of index below the permission."""
    bad = []
    for r in trace.select("active"):
        if r["update"] != "redefined":
            continue
        moved = moved_index(*(parse_q(r[k]) for k in ("a_prev", "b_prev", "a", "b")))
        if moved is not None and (r["permit"] is None or moved < r["permit"]):
            bad.append(r)
    return bad


def nesting_violations(trace: Trace) -> list[dict]:
    """Active records of a node whose interval leaves the one it chose last time.

    The comparison restarts whenever a node to its left was active in between,
    since that activity is an injury the construction allows.
    """
    bad = []
    last: dict[tuple, tuple[int, Fraction, Fraction]] = {}
    left_act: dict[int, list[tuple[int, tuple]]] = {}
    for r in trace.select("active"):
        node, m, s = tuple(r["node"]), r["level"], r["stage"]
        a, b = parse_q(r["a"]), parse_q(r["b"])
        if node in last:
            t, a0, b0 = last[node]
            injured = any(t < u < s and _left_of(x, node) for u, x in left_act.get(m, []))
            if not injured and (a < a0 or b > b0):
                bad.append(r)
        last[node] = (s, a, b)
        left_act.setdefault(m, []).append((s, node))
    return bad
