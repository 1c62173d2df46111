"""Conversions to sympy for resultants and factorization.

Variable layout everywhere: ``X0`` is the root variable, ``X1..Xn`` are the
field generators.
"""

from __future__ import annotations

from functools import lru_cache

import sympy

from ..exactnum.poly import MultiPoly


@lru_cache(maxsize=None)
def _syms(n: int) -> tuple:
    return tuple(sympy.Symbol(f"x{i}") for i in range(n))


_Y = sympy.Symbol("y_res")


def to_sympy(p: MultiPoly, nvars: int) -> sympy.Poly:
    gens = _syms(max(nvars, 1))
    data = {e + (0,) * (len(gens) - len(e)): c for e, c in p.items()}
    if not data:
        return sympy.Poly(0, *gens)
    return sympy.Poly.from_dict(data, *gens)


def from_sympy(P: sympy.Poly) -> MultiPoly:
    return MultiPoly({tuple(int(k) for k in e): int(c) for e, c in P.as_dict().items()})


def irreducible_factors(p: MultiPoly) -> list[MultiPoly]:
    """Distinct irreducible factors of ``p`` over Z that involve ``X0``."""
    nv = max(p.nvars, 1)
    _, factors = to_sympy(p, nv).factor_list()
    out = []
    for f, _ in factors:
        m = from_sympy(f)
        if m.degree(0) >= 1:
            out.append(_normalize(m))
    out.sort(key=str)
    return out


def _normalize(p: MultiPoly) -> MultiPoly:
    """Make the leading ``X0`` coefficient's leading term positive."""
    lead = p.coeffs_in(0)[-1]
    top = lead.sorted_terms()[0][1] if lead else 1
    return -p if top < 0 else p


def _res_y(f_expr, g_expr, nv: int) -> MultiPoly:
    gens = (_Y,) + _syms(nv)
    F = sympy.Poly(f_expr, *gens)
    G = sympy.Poly(g_expr, *gens)
    R = F.resultant(G)
    if isinstance(R, sympy.Poly):
        R = sympy.Poly(R.as_expr(), *_syms(nv))
    else:
        R = sympy.Poly(R, *_syms(nv))
    return from_sympy(R)


def sum_poly(px: MultiPoly, py: MultiPoly, nv: int) -> MultiPoly:
    """Polynomial vanishing at ``a + b`` whenever ``px(a) = 0 = py(b)``."""
    x0 = _syms(nv)[0]
    fx = to_sympy(px, nv).as_expr().subs(x0, _Y)
    gy = to_sympy(py, nv).as_expr().subs(x0, x0 - _Y)
    return _res_y(fx, gy, nv)


def product_poly(px: MultiPoly, py: MultiPoly, nv: int) -> MultiPoly:
    """Polynomial vanishing at ``a * b``; requires ``b``'s polynomial to avoid ``X0 | py``."""
    x0 = _syms(nv)[0]
    d = py.degree(0)
    fx = to_sympy(px, nv).as_expr().subs(x0, _Y)
    gy = sympy.expand(_Y ** d * to_sympy(py, nv).as_expr().subs(x0, x0 / _Y))
    return _res_y(fx, gy, nv)


def negate_root(p: MultiPoly) -> MultiPoly:
    return MultiPoly({e: (-c if (e[0] if e else 0) % 2 else c) for e, c in p.items()})


def invert_root(p: MultiPoly) -> MultiPoly:
    d = p.degree(0)
    out = {}
    for e, c in p.items():
        k = e[0] if e else 0
        e2 = (d - k,) + tuple(e[1:])
        out[e2] = c
    return MultiPoly(out)
