"""Truncated Hahn series over an archimedean coefficient field.

Exponents live in the ordered group Q^(L): finitely supported rational
vectors indexed by the points of a linear order L. A vector is positive when
its entry at the L-greatest point of its support is positive, so the point
``B`` dominates every multiple of a point ``A < B``. The element
``d_A = t^(-e_A)`` is positive infinite and ``d_A^n < d_B`` for all ``n``.

An element is a finite sum of terms ``c * t^g`` plus, when inexact, an
unknown remainder ``O(t^P)``: every term with exponent below ``P`` is known
exactly. Products and sums of exact elements stay exact; inverses and roots
expand a series and keep ``TRUNCATION`` steps of its smallest exponent.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from sympy import integer_nthroot

from ..exactnum.interval import as_fraction, fmt_q
from ..exactnum.poly import MultiPoly
from ..rcf.field import DivisionByZero, RcfElement, RealClosure, rc_roots

TRUNCATION = 8

Coeff = Union[Fraction, RcfElement]
Exp = tuple  # sorted tuple of (label, Fraction) with nonzero entries


class TruncationOverflow(ArithmeticError):
    """The leading term of a result lies beyond the stored truncation."""


class InfiniteError(ArithmeticError):
    """The residue of an infinite element was requested."""


def exp_of(d: Mapping) -> Exp:
    return tuple(sorted((k, as_fraction(v)) for k, v in d.items() if v != 0))


def _exp_add(a: Exp, b: Exp) -> Exp:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for k, v in b:
        t = out.get(k, 0) + v
        if t:
            out[k] = t
        else:
            del out[k]
    return tuple(sorted(out.items()))


def _exp_scale(a: Exp, r) -> Exp:
    return exp_of({k: v * r for k, v in a})


ZERO_EXP: Exp = ()


class ValueGroup:
    """The order L on coordinate labels, least significant first.

    Labels may be inserted over time; the relative order of existing labels
    never changes.
    """

    def __init__(self, labels: Iterable[str] = (), residue: RealClosure | None = None):
        self.order: list[str] = []
        self._labels: frozenset | None = None
        self.residue = residue if residue is not None else RealClosure()
        for lab in labels:
            self.append(lab)

    def append(self, label: str) -> None:
        if label in self.order:
            raise ValueError(f"duplicate label {label!r}")
        self.order.append(label)
        self._labels = None

    def insert_next_to(self, label: str, anchor: str, before: bool) -> None:
        if label in self.order:
            raise ValueError(f"duplicate label {label!r}")
        i = self.order.index(anchor)
        self.order.insert(i if before else i + 1, label)
        self._labels = None

    def insert_at(self, label: str, index: int) -> None:
        if label in self.order:
            raise ValueError(f"duplicate label {label!r}")
        self.order.insert(index, label)
        self._labels = None

    def retire(self, label: str) -> None:
        """Drop a label no live element refers to any more."""
        self.order.remove(label)
        self._labels = None

    def rank(self, label: str) -> int:
        return self.order.index(label)

    def exp_sign(self, e: Exp) -> int:
        if not e:
            return 0
        label, v = max(e, key=lambda kv: self.rank(kv[0]))
        return 1 if v > 0 else -1

    def exp_cmp(self, a: Exp, b: Exp) -> int:
        if a == b:
            return 0
        ka, kb = self.exp_key(a), self.exp_key(b)
        return (ka > kb) - (ka < kb)

    def exp_key(self, e: Exp) -> tuple:
        """Sort key realizing the group order: coordinates from the top label down."""
        d = dict(e)
        if self._labels is None:
            self._labels = frozenset(self.order)
        if not self._labels.issuperset(d):
            raise ValueError(f"exponent {e} mentions a label outside the group")
        return tuple(d.get(lab, 0) for lab in reversed(self.order))

    # constructors -------------------------------------------------------
    def const(self, c) -> "NonArchElement":
        c = _coeff(c)
        return NonArchElement(self, {} if _is_zero(c) else {ZERO_EXP: c})

    def monomial(self, c, exponent: Mapping) -> "NonArchElement":
        return NonArchElement(self, {exp_of(exponent): _coeff(c)})

    def d(self, label: str) -> "NonArchElement":
        """The positive infinite element ``t^(-e_label)``."""
        return self.monomial(1, {label: -1})

    def eps(self, label: str) -> "NonArchElement":
        """The positive infinitesimal ``t^(e_label)``."""
        return self.monomial(1, {label: 1})


def _coeff(c) -> Coeff:
    if isinstance(c, RcfElement):
        return c.exact if c.exact is not None else c
    return as_fraction(c)


def _is_zero(c: Coeff) -> bool:
    if isinstance(c, Fraction):
        return c == 0
    return c.sign() == 0


def _sign(c: Coeff) -> int:
    if isinstance(c, Fraction):
        return (c > 0) - (c < 0)
    return c.sign()


def _fmt_coeff(c: Coeff) -> str:
    if isinstance(c, Fraction):
        return fmt_q(c)
    return repr(c)


class NonArchElement:
    """``sum c_g t^g + O(t^precision)``; ``precision is None`` means exact."""

    __hash__ = None

    def __init__(self, group: ValueGroup, terms: Mapping[Exp, Coeff], precision: Exp | None = None):
        self.group = group
        self.precision = precision
        kept = {}
        for e, c in terms.items():
            c = _coeff(c)
            if precision is not None and group.exp_cmp(e, precision) >= 0:
                continue
            if not _is_zero(c):
                kept[e] = c
        self.terms = dict(sorted(kept.items(), key=lambda kv: group.exp_key(kv[0])))

    # inspection ---------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        if self.terms:
            return False
        if self.precision is not None:
            raise TruncationOverflow("all known terms cancelled; the element is O(t^%s)" % _fmt_exp(self.precision))
        return True

    def leading(self) -> tuple[Exp, Coeff]:
        if self.is_zero():
            raise ValueError("zero has no leading term")
        e = next(iter(self.terms))
        return e, self.terms[e]

    def sign(self) -> int:
        if self.is_zero():
            return 0
        return _sign(self.leading()[1])

    def coefficient(self, exponent: Mapping | Exp) -> Coeff:
        e = exponent if isinstance(exponent, tuple) else exp_of(exponent)
        if self.precision is not None and self.group.exp_cmp(e, self.precision) >= 0:
            raise TruncationOverflow(f"coefficient of t^{_fmt_exp(e)} lies beyond the truncation")
        return self.terms.get(e, Fraction(0))

    def __str__(self) -> str:
        parts = [f"{_fmt_coeff(c)}*t^{_fmt_exp(e)}" if e else _fmt_coeff(c) for e, c in self.terms.items()]
        if self.precision is not None:
            parts.append(f"O(t^{_fmt_exp(self.precision)})")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"NonArchElement({self})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "NonArchElement":
        if isinstance(other, NonArchElement):
            if other.group is not self.group:
                raise ValueError("elements over different value groups")
            return other
        if isinstance(other, (int, Fraction, RcfElement)):
            return self.group.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return na_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return NonArchElement(self.group, {e: -c for e, c in self.terms.items()}, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return na_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return na_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return na_mul(self, na_inv(other))

    def __rtruediv__(self, other):
        return na_mul(self._coerce(other), na_inv(self))

    def __pow__(self, n: int):
        if n < 0:
            return na_inv(self) ** (-n)
        out = self.group.const(1)
        base = self
        while n:
            if n & 1:
                out = na_mul(out, base)
            n >>= 1
            if n:
                base = na_mul(base, base)
        return out

    def _cmp(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return na_compare(self, other)

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0


def _fmt_exp(e: Exp) -> str:
    if not e:
        return "0"
    return "(" + ", ".join(f"{k}:{fmt_q(v)}" for k, v in e) + ")"


def _min_exp(g: ValueGroup, es: Iterable[Exp | None]) -> Exp | None:
    out = None
    for e in es:
        if e is not None and (out is None or g.exp_cmp(e, out) < 0):
            out = e
    return out


def na_add(x: NonArchElement, y: NonArchElement) -> NonArchElement:
    g = x.group
    terms = dict(x.terms)
    for e, c in y.terms.items():
        terms[e] = terms[e] + c if e in terms else c
    out = NonArchElement(g, terms, _min_exp(g, (x.precision, y.precision)))
    out.is_zero()  # raises when nothing below the truncation survived
    return out


def na_mul(x: NonArchElement, y: NonArchElement) -> NonArchElement:
    g = x.group
    if x.is_exact and not x.terms or y.is_exact and not y.terms:
        return g.const(0)
    terms: dict[Exp, Coeff] = {}
    for e1, c1 in x.terms.items():
        for e2, c2 in y.terms.items():
            e = _exp_add(e1, e2)
            terms[e] = terms[e] + c1 * c2 if e in terms else c1 * c2
    bounds = []
    if y.precision is not None:
        bounds.append(_exp_add(x.leading()[0], y.precision))
    if x.precision is not None:
        bounds.append(_exp_add(y.leading()[0], x.precision))
    out = NonArchElement(g, terms, _min_exp(g, bounds))
    out.is_zero()
    return out


def _unit_part(x: NonArchElement) -> tuple[Exp, Coeff, NonArchElement]:
    """Write ``x = c t^v (1 + u)`` with every exponent of ``u`` positive."""
    v, c = x.leading()
    g = x.group
    neg_v = _exp_scale(v, -1)
    u_terms = {_exp_add(e, neg_v): a / c for e, a in x.terms.items() if e != v}
    prec = None if x.precision is None else _exp_add(x.precision, neg_v)
    return v, c, NonArchElement(g, u_terms, prec)


def _series(u: NonArchElement, coeffs: Sequence[Fraction]) -> NonArchElement:
    """``sum_k coeffs[k] u^k`` for ``u`` with positive exponents, truncated consistently."""
    g = u.group
    if not u.terms:
        return NonArchElement(g, {ZERO_EXP: coeffs[0]}, u.precision)
    delta = next(iter(u.terms))
    cutoff = _min_exp(g, (_exp_scale(delta, len(coeffs)), u.precision))
    total: dict[Exp, Coeff] = {ZERO_EXP: coeffs[0]}
    power = NonArchElement(g, {ZERO_EXP: Fraction(1)})
    exact_u = NonArchElement(g, u.terms)
    for k in range(1, len(coeffs)):
        power = NonArchElement(g, na_mul(power, exact_u).terms, cutoff)
        for e, c in power.terms.items():
            total[e] = total[e] + coeffs[k] * c if e in total else coeffs[k] * c
    return NonArchElement(g, total, cutoff)


def _shift_scale(z: NonArchElement, v: Exp, c: Coeff) -> NonArchElement:
    g = z.group
    terms = {_exp_add(e, v): a * c for e, a in z.terms.items()}
    prec = None if z.precision is None else _exp_add(z.precision, v)
    return NonArchElement(g, terms, prec)


def na_inv(x: NonArchElement) -> NonArchElement:
    if x.is_zero():
        raise DivisionByZero("inverse of zero")
    v, c, u = _unit_part(x)
    coeffs = [Fraction((-1) ** k) for k in range(TRUNCATION + 1)]
    s = _series(u, coeffs)
    return _shift_scale(s, _exp_scale(v, -1), 1 / c)


def _binom(r: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out = out * (r - i) / (i + 1)
    return out


def coeff_root(group: ValueGroup, c: Coeff, q: int) -> Coeff:
    """Positive ``q``-th root of a positive residue-field coefficient."""
    if _sign(c) <= 0:
        raise ValueError("root of a nonpositive coefficient")
    if isinstance(c, Fraction):
        (num, ok_n), (den, ok_d) = integer_nthroot(c.numerator, q), integer_nthroot(c.denominator, q)
        if ok_n and ok_d:
            return Fraction(num, den)
        p = MultiPoly({(q,): c.denominator, (): -c.numerator})
        return rc_roots(group.residue, p)[-1]
    P = c.poly
    composed = MultiPoly({((e[0] if e else 0) * q,) + tuple(e[1:]): a for e, a in P.items()})
    for r in reversed(rc_roots(c.field, composed)):
        if r.sign() > 0 and r ** q == c:
            return r
    raise ValueError("no positive root found")  # pragma: no cover


def na_root(x: NonArchElement, q: int) -> NonArchElement:
    """Positive ``q``-th root of a positive element."""
    if q < 1:
        raise ValueError("root index must be positive")
    if x.sign() <= 0:
        raise ValueError("root of a nonpositive element")
    v, c, u = _unit_part(x)
    coeffs = [_binom(Fraction(1, q), k) for k in range(TRUNCATION + 1)]
    s = _series(u, coeffs)
    return _shift_scale(s, _exp_scale(v, Fraction(1, q)), coeff_root(x.group, c, q))


def na_compare(x: NonArchElement, y: NonArchElement) -> int:
    return na_add(x, -y).sign() if not (x is y) else 0


class Kind(enum.Enum):
    POS_INFINITE = "PosInfinite"
    NEG_INFINITE = "NegInfinite"
    UNIT = "Unit"
    INFINITESIMAL = "Infinitesimal"

    @property
    def finite(self) -> bool:
        return self in (Kind.UNIT, Kind.INFINITESIMAL)


def classify(x: NonArchElement) -> Kind:
    if x.is_zero():
        return Kind.INFINITESIMAL
    v, c = x.leading()
    s = x.group.exp_sign(v)
    if s < 0:
        return Kind.POS_INFINITE if _sign(c) > 0 else Kind.NEG_INFINITE
    return Kind.UNIT if s == 0 else Kind.INFINITESIMAL


def residue(x: NonArchElement) -> Coeff:
    if not classify(x).finite:
        raise InfiniteError(f"{x} is infinite")
    return x.coefficient(ZERO_EXP)


class MultClass(enum.Enum):
    SAME = "SameClass"
    X_LESS = "XClassLess"
    Y_LESS = "YClassLess"


@dataclass(frozen=True)
class ClassComparison:
    result: MultClass
    witness: int | None = None


def _top(x: NonArchElement) -> str:
    v = x.leading()[0]
    return max(v, key=lambda kv: x.group.rank(kv[0]))[0]


def same_class(x: NonArchElement, y: NonArchElement) -> bool:
    return _top(x) == _top(y)


def _below_power(y: NonArchElement, x: NonArchElement, n: int) -> bool:
    """``y < x^n`` for positive infinite ``x`` and ``y``."""
    g = x.group
    c = g.exp_cmp(y.leading()[0], _exp_scale(x.leading()[0], n))
    if c != 0:
        return c > 0
    return na_compare(y, x ** n) < 0


def mult_class_compare(x: NonArchElement, y: NonArchElement, n_budget: int = 64) -> ClassComparison:
    """Compare the multiplicative classes of two positive infinite elements.

    The class is read off the L-greatest coordinate of the leading exponent.
    For equal classes the witness is the least ``n <= n_budget`` with
    ``y < x^n`` and ``x < y^n``, or None when the budget is too small.
    """
    for z in (x, y):
        if classify(z) is not Kind.POS_INFINITE:
            raise ValueError(f"{z} is not positive infinite")
    g = x.group
    a, b = _top(x), _top(y)
    if a != b:
        return ClassComparison(MultClass.X_LESS if g.rank(a) < g.rank(b) else MultClass.Y_LESS)
    for n in range(1, n_budget + 1):
        if _below_power(y, x, n) and _below_power(x, y, n):
            return ClassComparison(MultClass.SAME, n)
    return ClassComparison(MultClass.SAME, None)


@dataclass
class DerivedOrder:
    """Finite linear order of multiplicative classes, least first."""

    classes: list[list[int]]
    labels: list[str]

    @property
    def has_left_endpoint(self) -> bool:
        return bool(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def isomorphic_to(self, order: Sequence[str]) -> bool:
        return list(order) == self.labels


def derived_order(elements: Sequence[NonArchElement], labels: Sequence[str] | None = None) -> DerivedOrder:
    """Quotient positive infinite elements by class and sort the classes.

    A class is labelled by the label of its first member.
    """
    labels = list(labels) if labels is not None else [str(i) for i in range(len(elements))]
    reps: list[int] = []
    classes: list[list[int]] = []
    for i, x in enumerate(elements):
        for k, r in enumerate(reps):
            if same_class(elements[r], x):
                classes[k].append(i)
                break
        else:
            reps.append(i)
            classes.append([i])
    order = sorted(range(len(reps)), key=lambda k: elements[reps[k]].group.rank(_top(elements[reps[k]])))
    return DerivedOrder([classes[k] for k in order], [labels[reps[k]] for k in order])
