"""Real closures of Q(y_1, ..., y_n) with the y_i given by cuts.

An element is a triple: an irreducible polynomial ``P(X0, X1..Xn)`` over Z
(``X0`` the root variable, ``Xi`` the i-th generator), an open isolating
interval ``(lo, hi)`` for ``X0``, and a generator stage ``k``. The triple is
certified when, for every generator point in the stage-``k`` box, ``P`` has
opposite nonzero signs at ``lo`` and ``hi`` and ``dP/dX0`` is nonzero on
``[lo, hi]``. Exactly one root then lies in ``(lo, hi)`` for every point of
the box, in particular at the true generator values.

Generators are assumed algebraically independent; nothing here checks it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import sympy

from ..cuts import CutKind, CutStream, FunctionCut, ScriptExhausted
from ..exactnum.interval import Box, RationalInterval, as_fraction, fmt_q
from ..exactnum.poly import MultiPoly, eval_box, excludes_zero
from ..exactnum.sturm import count_roots, refine_root, root_bound, sturm_isolate
from . import algebra

MAX_STAGE = 400
MAX_STEPS = 4096


class RefinementError(RuntimeError):
    """A certificate could not be produced within the refinement budget."""


class DivisionByZero(ZeroDivisionError):
    pass


@dataclass
class Generator:
    cut: CutStream
    name: str
    independent: bool = True


_POINT0 = RationalInterval.closed(0, 0)


def _point(q: Fraction) -> RationalInterval:
    return RationalInterval.closed(q, q)


class RealClosure:
    """Field context: holds the generator cuts in variable order ``X1..Xn``."""

    def __init__(self, generators: Iterable[CutStream] = (), names: Sequence[str] | None = None):
        self.generators: list[Generator] = []
        for i, g in enumerate(generators):
            self.add_generator(g, names[i] if names else None)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def add_generator(self, cut: CutStream, name: str | None = None) -> "RcfElement":
        self.generators.append(Generator(cut, name or f"y{len(self.generators) + 1}"))
        return self.generator(len(self.generators) - 1)

    def gen_box(self, stage: int, nvars: int) -> tuple:
        """Closed boxes of generators ``X1..X(nvars-1)`` at ``stage``."""
        out = []
        for i in range(max(nvars - 1, 0)):
            if i >= len(self.generators):
                raise ValueError(f"polynomial mentions X{i + 1} but the field has {self.ngens} generators")
            try:
                iv = self.generators[i].cut.interval(stage)
            except ScriptExhausted as exc:
                raise RefinementError(f"generator {self.generators[i].name} exhausted at stage {stage}") from exc
            out.append(RationalInterval.closed(iv.lo, iv.hi))
        return tuple(out)

    # constructors -----------------------------------------------------
    def rational(self, q) -> "RcfElement":
        q = as_fraction(q)
        return RcfElement(self, MultiPoly({(1,): q.denominator, (): -q.numerator}), exact=q)

    def generator(self, i: int) -> "RcfElement":
        """The element ``y_{i+1}`` itself."""
        P = MultiPoly.var(0) - MultiPoly.var(i + 1)
        cut = self.generators[i].cut
        for k in range(MAX_STAGE):
            iv = cut.interval(k)
            pad = max(iv.width, Fraction(1, 2 ** k))
            s = _certify(self, P, iv.lo - pad, iv.hi + pad, k)
            if s is not None:
                return RcfElement(self, P, iv.lo - pad, iv.hi + pad, k, s)
        raise RefinementError("could not certify generator")  # pragma: no cover

    def coerce(self, x) -> "RcfElement":
        if isinstance(x, RcfElement):
            if x.field is not self:
                raise ValueError("elements belong to different fields")
            return x
        return self.rational(x)

    def roots(self, p: MultiPoly) -> list["RcfElement"]:
        return rc_roots(self, p)


# certificates -----------------------------------------------------------

def _sign_over(field: RealClosure, P: MultiPoly, x: Fraction, k: int) -> int:
    """Sign of ``P(x, g)`` valid for all ``g`` in the stage-``k`` box, 0 if undecided."""
    if P.nvars <= 1:
        return P.sign_at(x) if P.degree(0) else (P.constant_term() > 0) - (P.constant_term() < 0)
    iv = eval_box(P, Box((_point(x),) + field.gen_box(k, P.nvars)))
    if iv.lo > 0:
        return 1
    if iv.hi < 0:
        return -1
    return 0


def _certify(field: RealClosure, P: MultiPoly, lo: Fraction, hi: Fraction, k: int) -> int | None:
    """Return the sign of ``P`` at ``lo`` when ``(lo, hi)`` certifiably isolates one root."""
    if lo >= hi:
        return None
    if P.nvars <= 1:
        s_lo, s_hi = P.sign_at(lo), P.sign_at(hi)
        if s_lo * s_hi != -1:
            return None
        if count_roots(P, RationalInterval(lo, hi)) != 1:
            return None
        return s_lo
    s_lo = _sign_over(field, P, lo, k)
    s_hi = _sign_over(field, P, hi, k)
    if s_lo * s_hi != -1:
        return None
    box = Box((RationalInterval.closed(lo, hi),) + field.gen_box(k, P.nvars))
    if not excludes_zero(P.derivative(0), box):
        return None
    return s_lo


# interval helpers on closed enclosures -----------------------------------

def _iv_add(a: RationalInterval, b: RationalInterval) -> RationalInterval:
    return RationalInterval.closed(a.lo + b.lo, a.hi + b.hi)


def _iv_mul(a: RationalInterval, b: RationalInterval) -> RationalInterval:
    ps = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return RationalInterval.closed(min(ps), max(ps))


class RcfElement:
    """A real algebraic number over the generator field; logically immutable.

    Refinement narrows the cached isolating interval in place, which never
    changes the number denoted.
    """

    __hash__ = None  # equality is decided by exact comparison

    def __init__(self, field: RealClosure, poly: MultiPoly, lo=None, hi=None, stage: int = 0,
                 sign_lo: int = 0, exact: Fraction | None = None):
        self.field = field
        self.poly = poly
        self.exact = exact
        if exact is not None:
            lo, hi = exact - 1, exact + 1
        self._lo = as_fraction(lo)
        self._hi = as_fraction(hi)
        self._stage = stage
        self._sign_lo = sign_lo

    # inspection ------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.exact is not None

    def isolating_interval(self) -> RationalInterval:
        if self.exact is not None:
            return _point(self.exact)
        return RationalInterval(self._lo, self._hi)

    def describe(self) -> dict:
        """Defining data: polynomial, isolating interval and the generator box it is valid over."""
        box = Box(self.field.gen_box(self._stage, self.poly.nvars)) if self.exact is None else Box()
        return {
            "poly": str(self.poly),
            "interval": self.isolating_interval().to_json(),
            "gen_stage": self._stage,
            "gen_box": box.to_json(),
        }

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"RcfElement({fmt_q(self.exact)})"
        return f"RcfElement({self.poly} in {self.isolating_interval()})"

    def __float__(self) -> float:
        iv = self.approx(60)
        return float(iv.midpoint)

    # refinement --------------------------------------------------------
    def _step(self) -> None:
        w = self._hi - self._lo
        for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
            m = self._lo + t * w
            s = _sign_over(self.field, self.poly, m, self._stage)
            if s == 0:
                continue
            if s == self._sign_lo:
                self._lo = m
            else:
                self._hi = m
            return
        if self._stage >= MAX_STAGE:
            raise RefinementError(f"generator stage budget exhausted refining {self!r}")
        self._stage += 1

    def refine(self, width) -> RationalInterval:
        """Narrow the isolating interval to width at most ``width``."""
        width = as_fraction(width)
        if self.exact is not None:
            return _point(self.exact)
        for _ in range(MAX_STEPS):
            if self._hi - self._lo <= width:
                return self.isolating_interval()
            self._step()
        raise RefinementError(f"step budget exhausted refining {self!r}")

    def approx(self, bits: int) -> RationalInterval:
        """Closed enclosure of width at most ``2**-bits``."""
        iv = self.refine(Fraction(1, 2 ** bits))
        return RationalInterval.closed(iv.lo, iv.hi)

    def _nonzero_enclosure(self) -> RationalInterval:
        """Closed enclosure not containing 0; raises on zero."""
        if self.sign() == 0:
            raise DivisionByZero("inverse of zero")
        bits = 0
        while True:
            iv = self.approx(bits)
            if not iv.contains(0):
                return iv
            bits += 1

    def sign(self) -> int:
        if self.exact is not None:
            return (self.exact > 0) - (self.exact < 0)
        if self.poly == MultiPoly.var(0):
            return 0
        # an irreducible polynomial other than X0 does not vanish at 0 generically
        for _ in range(MAX_STEPS):
            if self._lo >= 0:
                return 1
            if self._hi <= 0:
                return -1
            self._step()
        raise RefinementError(f"could not decide the sign of {self!r}")

    def cut(self, kind: CutKind = CutKind.STRICT) -> FunctionCut:
        """Cut stream whose stage-``s`` interval has width at most ``2**-s``."""
        if self.exact is not None:
            q = self.exact

            def fn(s):
                w = Fraction(1, 2 ** s)
                if kind is CutKind.RIGHT_LEANING:
                    return q - w, q
                if kind is CutKind.LEFT_LEANING:
                    return q, q + w
                return q - w / 2, q + w / 2
        else:
            def fn(s):
                iv = self.refine(Fraction(1, 2 ** s))
                return iv.lo, iv.hi
        return FunctionCut(fn, kind, source="field")

    # arithmetic ------------------------------------------------------
    def __neg__(self):
        return rc_neg(self)

    def __add__(self, other):
        return rc_add(self, self.field.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return rc_add(self, rc_neg(self.field.coerce(other)))

    def __rsub__(self, other):
        return rc_add(self.field.coerce(other), rc_neg(self))

    def __mul__(self, other):
        return rc_mul(self, self.field.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rc_mul(self, rc_inv(self.field.coerce(other)))

    def __rtruediv__(self, other):
        return rc_mul(self.field.coerce(other), rc_inv(self))

    def __pow__(self, n: int):
        if n < 0:
            return rc_inv(self) ** (-n)
        out = self.field.rational(1)
        for _ in range(n):
            out = out * self
        return out

    def _cmp(self, other) -> int:
        if not isinstance(other, (RcfElement, int, Fraction)):
            return NotImplemented
        return rc_compare(self, self.field.coerce(other))

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


# root selection -----------------------------------------------------------

def _linear_root(F: MultiPoly) -> Fraction | None:
    if F.nvars <= 1 and F.degree(0) == 1:
        c0, c1 = F.univariate_coeffs(0)
        return Fraction(-c0, c1)
    return None


def _select_root(field: RealClosure, R: MultiPoly, enclosure: Callable[[int], RationalInterval],
                 start: int = 2) -> RcfElement:
    """The root of ``R`` lying in ``enclosure(k)`` for every ``k``.

    Factors of ``R`` are eliminated by showing they have no root in the
    enclosure; once one factor survives, an isolating interval around the
    enclosure is certified for it.
    """
    if R.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    factors = algebra.irreducible_factors(R)
    for k in range(start, MAX_STAGE):
        J = enclosure(k)
        alive = []
        for F in factors:
            box = Box((J,) + field.gen_box(k, F.nvars))
            if not excludes_zero(F, box):
                alive.append(F)
        if len(alive) != 1:
            continue
        F = alive[0]
        q = _linear_root(F)
        if q is not None:
            return field.rational(q)
        pad = max(J.width, Fraction(1, 2 ** k))
        lo, hi = J.lo - pad, J.hi + pad
        s = _certify(field, F, lo, hi, k)
        if s is not None:
            return RcfElement(field, F, lo, hi, k, s)
    raise RefinementError(f"could not single out a root of {R}")


def _transformed(x: RcfElement, P: MultiPoly, lo: Fraction, hi: Fraction,
                 enclosure: Callable[[int], RationalInterval]) -> RcfElement:
    """Try to certify ``(P, (lo, hi))`` directly, else fall back to root selection."""
    P = _primitive(P)
    s = _certify(x.field, P, lo, hi, x._stage)
    if s is not None:
        return RcfElement(x.field, P, lo, hi, x._stage, s)
    return _select_root(x.field, P, enclosure)


def _primitive(P: MultiPoly) -> MultiPoly:
    g = math.gcd(*(c for _, c in P.items()))
    if g > 1:
        P = MultiPoly({e: c // g for e, c in P.items()})
    return algebra._normalize(P)


def _compose_shift_scale(P: MultiPoly, a: Fraction, b: Fraction) -> MultiPoly:
    """Integer polynomial with roots ``a*r + b`` for roots ``r`` of ``P``."""
    nv = max(P.nvars, 1)
    x0 = algebra._syms(nv)[0]
    expr = algebra.to_sympy(P, nv).as_expr().subs(x0, (x0 - sympy.Rational(b.numerator, b.denominator))
                                                  / sympy.Rational(a.numerator, a.denominator))
    poly = sympy.Poly(sympy.expand(expr), *algebra._syms(nv))
    _, poly = poly.clear_denoms()
    return algebra.from_sympy(poly)


def rc_neg(x: RcfElement) -> RcfElement:
    if x.exact is not None:
        return x.field.rational(-x.exact)
    P = algebra.negate_root(x.poly)
    return _transformed(x, P, -x._hi, -x._lo, lambda k: _neg_iv(x.approx(k)))


def _neg_iv(iv: RationalInterval) -> RationalInterval:
    return RationalInterval.closed(-iv.hi, -iv.lo)


def rc_add(x: RcfElement, y: RcfElement) -> RcfElement:
    if x.exact is not None and y.exact is not None:
        return x.field.rational(x.exact + y.exact)
    if x.exact is not None:
        x, y = y, x
    if y.exact is not None:
        if y.exact == 0:
            return x
        q = y.exact
        P = _compose_shift_scale(x.poly, Fraction(1), q)
        return _transformed(x, P, x._lo + q, x._hi + q, lambda k: _iv_add(x.approx(k), _point(q)))
    nv = max(x.poly.nvars, y.poly.nvars, 1)
    R = algebra.sum_poly(x.poly, y.poly, nv)
    return _select_root(x.field, R, lambda k: _iv_add(x.approx(k + 1), y.approx(k + 1)))


def _mag_bits(x: RcfElement) -> int:
    iv = x.approx(0)
    return max(abs(iv.lo), abs(iv.hi), Fraction(1)).__ceil__().bit_length()


def rc_mul(x: RcfElement, y: RcfElement) -> RcfElement:
    if x.exact is not None and y.exact is not None:
        return x.field.rational(x.exact * y.exact)
    if x.exact is not None:
        x, y = y, x
    if y.exact is not None:
        q = y.exact
        if q == 0:
            return x.field.rational(0)
        if q == 1:
            return x
        P = _compose_shift_scale(x.poly, q, Fraction(0))
        lo, hi = sorted((x._lo * q, x._hi * q))
        return _transformed(x, P, lo, hi, lambda k: _iv_mul(x.approx(k), _point(q)))
    if x.sign() == 0 or y.sign() == 0:
        return x.field.rational(0)
    nv = max(x.poly.nvars, y.poly.nvars, 1)
    R = algebra.product_poly(x.poly, y.poly, nv)
    extra = _mag_bits(x) + _mag_bits(y) + 1
    return _select_root(x.field, R, lambda k: _iv_mul(x.approx(k + extra), y.approx(k + extra)))


def rc_inv(x: RcfElement) -> RcfElement:
    if x.exact is not None:
        if x.exact == 0:
            raise DivisionByZero("inverse of zero")
        return x.field.rational(1 / x.exact)
    J = x._nonzero_enclosure()
    P = algebra.invert_root(x.poly)

    def enclosure(k):
        bits = k
        while True:
            iv = x.approx(bits)
            if not iv.contains(0):
                inv = RationalInterval.closed(1 / iv.hi, 1 / iv.lo)
                if inv.width <= Fraction(1, 2 ** k):
                    return inv
            bits += 1

    return _transformed(x, P, 1 / J.hi, 1 / J.lo, enclosure)


def rc_compare(x: RcfElement, y: RcfElement) -> int:
    """Exact three-way comparison; equality is certified algebraically."""
    if x is y:
        return 0
    if x.exact is not None and y.exact is not None:
        return (x.exact > y.exact) - (x.exact < y.exact)
    if x.poly == y.poly and x.exact is None and y.exact is None:
        a, b = x.isolating_interval(), y.isolating_interval()
        sep = a.separator(b)
        if sep is not None:
            return sep[1]
        if a.lo == b.lo and a.hi == b.hi and x._stage == y._stage:
            return 0
    for bits in range(0, 16, 3):
        a, b = x.approx(bits), y.approx(bits)
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
    return rc_add(x, rc_neg(y)).sign()


# roots of polynomials with field coefficients ------------------------------

def rc_roots(field: RealClosure, p: MultiPoly) -> list[RcfElement]:
    """All distinct real roots in ``X0`` of ``p``, whose other variables are generators."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    if p.degree(0) == 0:
        return []
    out: list[RcfElement] = []
    for F in algebra.irreducible_factors(p):
        out.extend(_irreducible_roots(field, F))
    out.sort(key=functools.cmp_to_key(rc_compare))
    return out


def _irreducible_roots(field: RealClosure, F: MultiPoly) -> list[RcfElement]:
    q = _linear_root(F)
    if q is not None:
        return [field.rational(q)]
    if F.nvars <= 1:
        coeffs = F.univariate_coeffs(0)
        out = []
        for iv in sturm_isolate(coeffs, _bound_window(coeffs)):
            out.append(RcfElement(field, F, iv.lo, iv.hi, 0, F.sign_at(iv.lo)))
        return out
    cs = F.coeffs_in(0)
    for k in range(4, MAX_STAGE, 4):
        gbox = field.gen_box(k, F.nvars)
        full = (_POINT0,) + gbox
        encl = [eval_box(c, Box(full)) if c.nvars else _point(Fraction(c.constant_term())) for c in cs]
        lead = encl[-1]
        if lead.contains(0):
            continue
        top = max(max(abs(c.lo), abs(c.hi)) for c in encl[:-1])
        B = 1 + top / min(abs(lead.lo), abs(lead.hi))
        mid = [Fraction(0)] + [iv.midpoint for iv in gbox]
        star = [c.evaluate(mid) for c in cs]
        den = 1
        for c in star:
            den = math.lcm(den, c.denominator)
        star_int = [int(c * den) for c in star]
        found = _certify_all(field, F, star_int, B, k, gbox)
        if found is not None:
            return found
    raise RefinementError(f"could not isolate the roots of {F}")


def _bound_window(coeffs: list[int]) -> RationalInterval:
    b = root_bound(coeffs)
    return RationalInterval(-b, b)


def _certify_all(field, F, star, B, k, gbox) -> list[RcfElement] | None:
    isolated = sturm_isolate(star, RationalInterval(-B, B))
    certified = []
    for iv in isolated:
        cur, s = iv, None
        for _ in range(16):
            s = _certify(field, F, cur.lo, cur.hi, k)
            if s is not None:
                break
            cur = refine_root(star, cur, cur.width / 4)
        if s is None:
            return None
        certified.append((cur, s))
    edges = [-B] + [e for cur, _ in certified for e in (cur.lo, cur.hi)] + [B]
    for a, b in zip(edges[::2], edges[1::2]):
        if a < b and not _gap_clear(F, a, b, gbox):
            return None
    return [RcfElement(field, F, cur.lo, cur.hi, k, s) for cur, s in certified]


def _gap_clear(F: MultiPoly, a: Fraction, b: Fraction, gbox: tuple, budget: int = 512) -> bool:
    """True when ``F`` certifiably has no root on ``[a, b]`` over the generator box."""
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        if excludes_zero(F, Box((RationalInterval.closed(lo, hi),) + gbox)):
            continue
        budget -= 1
        if budget <= 0:
            return False
        m = (lo + hi) / 2
        stack.extend([(lo, m), (m, hi)])
    return True
