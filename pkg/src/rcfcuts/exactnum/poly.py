"""Sparse multivariate polynomials with integer coefficients."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .interval import Box, RationalInterval, as_fraction
from . import kernels


def _trim(exps: Iterable[int]) -> tuple:
    exps = tuple(int(e) for e in exps)
    n = len(exps)
    while n and exps[n - 1] == 0:
        n -= 1
    if any(e < 0 for e in exps):
        raise ValueError("negative exponent")
    return exps[:n]


def _add_exps(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    return tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


class MultiPoly:
    """Immutable polynomial in ``Z[X0, X1, ...]``.

    Terms map trimmed exponent tuples to nonzero ints; ``()`` is the
    constant monomial.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | None = None):
        clean: dict[tuple, int] = {}
        for exps, c in (terms or {}).items():
            c = int(c)
            if c:
                key = _trim(exps)
                clean[key] = clean.get(key, 0) + c
                if clean[key] == 0:
                    del clean[key]
        self._terms = clean
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls({(): c})

    @classmethod
    def var(cls, i: int, power: int = 1) -> "MultiPoly":
        return cls({(0,) * i + (power,): 1})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[int], var: int = 0) -> "MultiPoly":
        """``coeffs`` low to high degree."""
        return cls({(0,) * var + (k,): c for k, c in enumerate(coeffs)})

    # basic queries ----------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def nvars(self) -> int:
        """One more than the largest variable index used (0 for constants)."""
        return max((len(e) for e in self._terms), default=0)

    @property
    def max_var(self) -> int:
        return self.nvars - 1

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def degree(self, var: int) -> int:
        return max((e[var] if var < len(e) else 0 for e in self._terms), default=0)

    @property
    def height(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    def is_constant(self) -> bool:
        return all(e == () for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def is_univariate(self, var: int = 0) -> bool:
        return self.variables() <= {var}

    def univariate_coeffs(self, var: int = 0) -> list[int]:
        """Coefficients low to high of a polynomial in ``X_var`` alone."""
        if not self.is_univariate(var):
            raise ValueError(f"{self} is not univariate in X{var}")
        out = [0] * (self.degree(var) + 1)
        for e, c in self._terms.items():
            out[e[var] if var < len(e) else 0] += c
        return out

    def leading_univariate_coeff(self) -> int:
        cs = self.univariate_coeffs(self.max_var if self.nvars else 0)
        return cs[-1]

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t: dict[tuple, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exps(e1, e2)
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def derivative(self, var: int) -> "MultiPoly":
        t = {}
        for e, c in self._terms.items():
            k = e[var] if var < len(e) else 0
            if k:
                e2 = list(e)
                e2[var] -= 1
                t[tuple(e2)] = c * k
        return MultiPoly(t)

    def coeffs_in(self, var: int) -> list["MultiPoly"]:
        """Write ``self = sum_k X_var^k * coeffs[k]`` with ``coeffs[k]`` free of X_var."""
        out: dict[int, dict] = {}
        for e, c in self._terms.items():
            k = e[var] if var < len(e) else 0
            e2 = list(e) + [0] * (var + 1 - len(e))
            e2[var] = 0
            out.setdefault(k, {})[tuple(e2)] = c
        deg = max(out, default=0)
        return [MultiPoly(out.get(k, {})) for k in range(deg + 1)]

    def rename(self, mapping: Mapping[int, int]) -> "MultiPoly":
        """Move variable ``i`` to ``mapping[i]`` (identity when absent)."""
        t = {}
        for e, c in self._terms.items():
            new: dict[int, int] = {}
            for i, k in enumerate(e):
                if k:
                    j = mapping.get(i, i)
                    new[j] = new.get(j, 0) + k
            width = max(new, default=-1) + 1
            key = tuple(new.get(i, 0) for i in range(width))
            t[key] = t.get(key, 0) + c
        return MultiPoly(t)

    # evaluation -------------------------------------------------------
    def evaluate(self, point: Sequence) -> Fraction:
        pt = [as_fraction(x) for x in point]
        if self.nvars > len(pt):
            raise ValueError("point has too few coordinates")
        total = Fraction(0)
        for e, c in self._terms.items():
            m = Fraction(c)
            for i, k in enumerate(e):
                if k:
                    m *= pt[i] ** k
            total += m
        return total

    def __call__(self, *point) -> Fraction:
        return self.evaluate(point)

    def sign_at(self, q) -> int:
        """Sign of a univariate (in its top variable) polynomial at rational ``q``."""
        q = as_fraction(q)
        var = max(self.max_var, 0)
        return kernels.sign_at(self.univariate_coeffs(var), q.numerator, q.denominator)

    def kernel_terms(self, dims: int) -> list:
        return [(c, e + (0,) * (dims - len(e))) for e, c in self._terms.items()]

    # text -------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple, int]]:
        n = self.nvars

        def key(item):
            e = item[0] + (0,) * (n - len(item[0]))
            return (sum(e), e)

        return sorted(self._terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"X{i}" if k == 1 else f"X{i}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        src = text.replace(" ", "").replace("**", "^")
        if not src:
            raise ValueError("empty polynomial text")
        if src[0] not in "+-":
            src = "+" + src
        pieces = re.findall(r"[+-][^+-]+", src)
        if "".join(pieces) != src:
            raise ValueError(f"cannot parse polynomial {text!r}")
        terms: dict[tuple, int] = {}
        for piece in pieces:
            sign = -1 if piece[0] == "-" else 1
            coeff = 1
            exps: dict[int, int] = {}
            for factor in piece[1:].split("*"):
                m = re.fullmatch(r"X(\d+)(?:\^(\d+))?", factor)
                if m:
                    i = int(m.group(1))
                    exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
                elif re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                else:
                    raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            width = max(exps, default=-1) + 1
            key = tuple(exps.get(i, 0) for i in range(width))
            terms[key] = terms.get(key, 0) + sign * coeff
        return cls(terms)


X = MultiPoly.var


def eval_box(p: MultiPoly, b: Box) -> RationalInterval:
    """Closed interval enclosing ``p(x)`` for every ``x`` in ``b``."""
    if p.nvars > len(b):
        raise ValueError(f"box of dimension {len(b)} does not cover {p}")
    if p.is_zero():
        return RationalInterval.closed(0, 0)
    dims = len(b)
    lo_nums, hi_nums, dens = [], [], []
    for iv in b:
        d = math.lcm(iv.lo.denominator, iv.hi.denominator)
        lo_nums.append(iv.lo.numerator * (d // iv.lo.denominator))
        hi_nums.append(iv.hi.numerator * (d // iv.hi.denominator))
        dens.append(d)
    lo, hi, den = kernels.box_eval(p.kernel_terms(dims), lo_nums, hi_nums, dens)
    return RationalInterval.closed(Fraction(lo, den), Fraction(hi, den))


def excludes_zero(p: MultiPoly, b: Box) -> bool:
    return not eval_box(p, b).contains(0)
