"""Search for a sub-box on which a polynomial stays away from zero."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .interval import Box, RationalInterval
from .poly import MultiPoly, eval_box


class NotFound(LookupError):
    """No zero-free sub-box was found within the subdivision budget."""


@dataclass(frozen=True)
class Avoidance:
    prefix: Box
    interval: RationalInterval
    splits: int

    @property
    def box(self) -> Box:
        return self.prefix.extend(self.interval)


def find_avoiding_box(
    p: MultiPoly,
    prefix: Box,
    target: RationalInterval,
    budget: int = 32,
    split_prefix: bool = True,
) -> Avoidance:
    """Sub-box of ``prefix × target`` whose image under ``p`` excludes 0.

    ``p`` lives in ``X0..Xm`` where ``m = prefix.dim`` is the target
    coordinate. Boxes are explored best-first: the next box split is the one
    whose enclosure leans furthest to one side of zero, ties going to the
    earliest (leftmost) box. The widest splittable coordinate is bisected;
    ``budget`` caps the number of bisections. With ``split_prefix=False`` only the target coordinate is cut.
    Raises :class:`NotFound` when the budget runs out.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    m = prefix.dim
    if p.nvars > m + 1:
        raise ValueError(f"{p} uses variables beyond X{m}")
    if any(iv.width <= 0 for iv in prefix):
        raise ValueError("prefix intervals must be nondegenerate")
    start = Box(tuple(prefix) + (RationalInterval(target.lo, target.hi),))
    order = 0
    heap: list = []

    def push(box: Box) -> Avoidance | None:
        nonlocal order
        enc = eval_box(p, box)
        if not enc.contains(0):
            return Avoidance(Box(box[:m]), box[m], splits)
        lean = min(-enc.lo, enc.hi) / enc.width
        heapq.heappush(heap, (lean, order, box))
        order += 1
        return None

    splits = 0
    found = push(start)
    while found is None and heap and splits < budget:
        _, _, box = heapq.heappop(heap)
        j = box.widest() if split_prefix else m
        splits += 1
        for half in box.split(j):
            found = push(half)
            if found is not None:
                break
    if found is not None:
        return found
    raise NotFound(f"no zero-free box for {p} within {budget} splits")
