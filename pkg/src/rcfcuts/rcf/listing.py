"""Systematic listing of field elements and the cut enumeration over it."""

from __future__ import annotations

from typing import Iterable, Iterator

from ..cuts import CutKind, CutStream
from ..enumeration import CutEnumeration
from ..exactnum.polyenum import iter_polys
from ..exactnum.qorder import q_at
from .field import RcfElement, RealClosure, RefinementError, rc_roots


class FieldListing:
    """Generators first, then the real roots of each polynomial in the global order.

    Polynomials are read with ``X0`` as the root variable and ``X1..Xn`` as
    generators; those not involving ``X0`` are skipped. Roots come out in
    increasing order per polynomial and repeats are kept.
    """

    def __init__(self, field: RealClosure):
        self.field = field
        self._elements: list[RcfElement] = []
        self._origin: list[str] = []
        self.skipped: list[str] = []
        self._source = self._produce()

    def _produce(self) -> Iterator[tuple[RcfElement, str]]:
        for i in range(self.field.ngens):
            yield self.field.generator(i), f"generator {i}"
        for p in iter_polys(self.field.ngens, where=lambda p: p.degree(0) >= 1):
            try:
                roots = rc_roots(self.field, p)
            except RefinementError:
                self.skipped.append(str(p))
                continue
            for k, r in enumerate(roots):
                yield r, f"root {k} of {p}"

    def element(self, j: int) -> RcfElement:
        while len(self._elements) <= j:
            e, why = next(self._source)
            self._elements.append(e)
            self._origin.append(why)
        return self._elements[j]

    def origin(self, j: int) -> str:
        self.element(j)
        return self._origin[j]


def enumerate_field_cuts(gens: Iterable[CutStream] = (), kind: CutKind = CutKind.STRICT,
                         field: RealClosure | None = None) -> CutEnumeration:
    """Cuts of every element: even indices are rationals in the fixed order, odd ones closure terms.

    The returned enumeration carries ``.field`` and ``.listing`` attributes.
    """
    field = field if field is not None else RealClosure(gens)
    listing = FieldListing(field)

    def factory(i: int) -> CutStream:
        if i % 2 == 0:
            return field.rational(q_at(i // 2)).cut(kind)
        return listing.element(i // 2).cut(kind)

    enum = CutEnumeration(factory)
    enum.field = field
    enum.listing = listing
    return enum
