"""A fixed bijection between the naturals and the nonzero polynomials.

Polynomials are graded by weight: ``total degree + largest variable index +
height`` for nonconstant ones and ``|c| + 1`` for a constant ``c``. Each
weight class is finite and sorted by ``_class_key``; index 0 is ``X0``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Iterator

from .poly import MultiPoly


def weight(p: MultiPoly) -> int:
    if p.is_zero():
        raise ValueError("the zero polynomial is not enumerated")
    if p.is_constant():
        return abs(p.constant_term()) + 1
    return p.total_degree + p.max_var + p.height


def _class_key(p: MultiPoly):
    n = p.nvars
    terms = tuple(
        (e + (0,) * (n - len(e)), abs(c), c < 0) for e, c in p.sorted_terms()
    )
    return (p.is_constant(), p.total_degree, p.max_var, len(terms), terms)


def _monomials(nv: int, d: int) -> list[tuple]:
    out = []
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(nv), total):
            e = [0] * nv
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


@lru_cache(maxsize=None)
def weight_class(w: int, vmax: int | None = None) -> tuple[MultiPoly, ...]:
    """All nonzero polynomials of weight ``w`` (max variable ≤ ``vmax``), sorted."""
    found: list[MultiPoly] = []
    if w >= 2:
        found += [MultiPoly.const(w - 1), MultiPoly.const(-(w - 1))]
    top_v = w - 2 if vmax is None else min(vmax, w - 2)
    for v in range(0, top_v + 1):
        for d in range(1, w - v):
            h = w - d - v
            if h < 1:
                continue
            monos = _monomials(v + 1, d)
            exact_deg = [sum(e) == d for e in monos]
            uses_v = [e[v] > 0 for e in monos]
            values = range(-h, h + 1)
            for coeffs in itertools.product(values, repeat=len(monos)):
                if h not in coeffs and -h not in coeffs:
                    continue
                if not any(c and x for c, x in zip(coeffs, exact_deg)):
                    continue
                if not any(c and x for c, x in zip(coeffs, uses_v)):
                    continue
                found.append(MultiPoly({e: c for e, c in zip(monos, coeffs) if c}))
    found.sort(key=_class_key)
    return tuple(found)


@lru_cache(maxsize=None)
def _class_positions(w: int) -> dict:
    return {p: i for i, p in enumerate(weight_class(w))}


def poly_enumerate(index: int) -> MultiPoly:
    """The ``index``-th nonzero polynomial in the fixed order."""
    if index < 0:
        raise ValueError("negative index")
    w = 1
    while True:
        cls = weight_class(w)
        if index < len(cls):
            return cls[index]
        index -= len(cls)
        w += 1


def poly_index(p: MultiPoly) -> int:
    """Inverse of :func:`poly_enumerate`."""
    w = weight(p)
    offset = sum(len(weight_class(k)) for k in range(1, w))
    return offset + _class_positions(w)[p]


def iter_polys(vmax: int | None = None, where: Callable[[MultiPoly], bool] | None = None) -> Iterator[MultiPoly]:
    """Polynomials in enumeration order, optionally restricted to ``X0..X_vmax``."""
    for w in itertools.count(1):
        for p in weight_class(w, vmax):
            if where is None or where(p):
                yield p


@lru_cache(maxsize=None)
def _univariate_prefix(n: int) -> tuple[MultiPoly, ...]:
    return tuple(itertools.islice(iter_polys(0), n))


def univariate_enumerate(n: int) -> MultiPoly:
    """The ``n``-th polynomial of ``Z[X0]`` in the global order."""
    size = 64
    while size <= n:
        size *= 2
    return _univariate_prefix(size)[n]


def first_polys(count: int, vmax: int) -> list[MultiPoly]:
    """The first ``count`` polynomials whose variables lie in ``X0..X_vmax``."""
    return list(itertools.islice(iter_polys(vmax), count))
