"""The ten acceptance criteria, each timed against its limit.

Every test records a one-line verdict; the lines are printed together at
the end of the run by the hook in conftest.py.
"""

import contextlib
import io
import random
import time
from fractions import Fraction
from math import factorial
from pathlib import Path

import pytest
import sympy

from rcfcuts.cli import algebraic_cut, run
from rcfcuts.constructions import (
    CeScript, listing_poly, nesting_violations, order_violations, permitting_violations, run_low,
    run_nonarch_tree, run_sigma2, verify_trace,
)
from rcfcuts.constructions.nonarch_tree import parse_node
from rcfcuts.constructions.samples import low_script, nonarch_script, order_approximation
from rcfcuts.constructions.trace import Trace
from rcfcuts.cuts import FunctionCut, RationalCut, distinct_at, first_separation
from rcfcuts.enumeration import CutEnumeration, SetScript, cut_to_set, friedberg, set_real, set_to_cut
from rcfcuts.exactnum import Box, Bracket, MultiPoly, NotFound, RationalInterval, count_roots, excludes_zero, find_avoiding_box
from rcfcuts.nonarch import (
    InfiniteError, Kind, ValueGroup, build_prime_copy, classify, na_compare, na_inv, residue,
)
from rcfcuts.nonarch.series import ZERO_EXP
from rcfcuts.rcf import RealClosure, rc_add, rc_compare, rc_mul, rc_roots

from conftest import ACCEPTANCE

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@contextlib.contextmanager
def criterion(number, limit, what):
    """Time the block, record a verdict line and fail on a breach of the limit."""
    t0 = time.perf_counter()
    status = {"detail": ""}
    try:
        yield status
    except BaseException as exc:
        dt = time.perf_counter() - t0
        ACCEPTANCE.append(f"criterion {number:>2} FAIL  {what} ({dt:.2f} s): {type(exc).__name__}: {exc}"[:300])
        raise
    dt = time.perf_counter() - t0
    ok = dt < limit
    detail = f"; {status['detail']}" if status["detail"] else ""
    ACCEPTANCE.append(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {what} ({dt:.2f} s < {limit} s){detail}")
    assert ok, f"criterion {number} took {dt:.2f} s, limit {limit} s"


# -- 1 ----------------------------------------------------------------------

def _twin(s):
    """The other representation of the same dyadic real, or None."""
    c = s.canonical()
    if c.tail == "finite" and c.members:
        m = max(c.members)
        return SetScript(m + 1, frozenset(c.members - {m}), "cofinite")
    if c.tail == "cofinite":
        below = [n for n in range(c.N) if n not in c.members]
        if below:
            m = max(below)
            return SetScript(m + 1, frozenset(n for n in c.members if n < m) | {m}, "finite")
    return None


def test_criterion_1_bridge_round_trip():
    with criterion(1, 5, "bridge round trip and collisions, 1000 set scripts") as st:
        rng = random.Random(1)
        scripts = []
        for _ in range(1000):
            n = rng.randint(0, 24)
            scripts.append(SetScript(n, frozenset(i for i in range(n) if rng.random() < 0.5),
                                     rng.choice(["finite", "cofinite"])))
        for s in scripts:
            c = set_to_cut(s)
            assert all(cut_to_set(c, k) == (k in s) for k in range(s.N + 3))
        pool = scripts + [t for t in map(_twin, scripts) if t is not None]
        by_real = {}
        for s in pool:
            by_real.setdefault(set_real(s), set()).add(s.canonical())
        collisions = 0
        for group in by_real.values():
            assert len(group) <= 2
            if len(group) == 2:
                a, b = group
                assert {a.tail, b.tail} == {"finite", "cofinite"}
                collisions += 1
        st["detail"] = f"{collisions} finite/cofinite collisions"


# -- 2 ----------------------------------------------------------------------

def _sqrt_cut(n):
    return algebraic_cut([-n, 0, 1])


def test_criterion_2_friedberg():
    with criterion(2, 10, "Friedberg transformer, 200 enumerations") as st:
        rng = random.Random(2)
        admitted_total = 0
        for _ in range(200):
            size = rng.randint(2, 16)
            reals = [("q", Fraction(rng.randint(-12, 12), rng.randint(1, 6))) if rng.random() < 0.85
                     else ("sqrt", rng.choice([2, 3, 5])) for _ in range(size // 2 + 1)]
            picks = [rng.choice(reals) for _ in range(size)]
            picks[rng.randrange(size)] = picks[0]  # at least one duplicate
            cuts = [RationalCut(v) if k == "q" else _sqrt_cut(v) for k, v in picks]
            src = CutEnumeration(cuts)
            res = friedberg(src, 64 + size)
            # back_map is a bijection from an initial segment onto distinct inputs
            assert sorted(res.back_map) == list(range(len(res.back_map)))
            assert len(set(res.back_map.values())) == len(res.back_map)
            for adm in res.log:
                assert res.back_map[adm.output_index] == adm.input_index
                for other in res.log:
                    if other.output_index < adm.output_index:
                        assert distinct_at(src.stream(adm.input_index), src.stream(other.input_index), adm.step)
            admitted = res.admitted_inputs()
            for i in range(size):
                same = [j for j in admitted if first_separation(src.stream(i), src.stream(j), 64) is None]
                assert len(same) == 1
            assert len(admitted) == len(set(picks))
            admitted_total += len(admitted)
        st["detail"] = f"{admitted_total} admissions"


# -- 3 ----------------------------------------------------------------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _prem(a, b):
    a = [Fraction(x) for x in a]
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        for k in range(len(b)):
            a[len(a) - len(b) + k] -= f * b[k]
        a = _trim(a)
    return a


def _squarefree(p):
    d = [i * c for i, c in enumerate(p)][1:]
    a, b = [Fraction(x) for x in p], [Fraction(x) for x in _trim(d)]
    while b:
        a, b = b, _prem(a, b)
    g = a
    # exact division p / g
    q = [Fraction(0)] * (len(p) - len(g) + 1)
    r = [Fraction(x) for x in p]
    for k in range(len(q) - 1, -1, -1):
        q[k] = r[k + len(g) - 1] / g[-1]
        for j in range(len(g)):
            r[k + j] -= q[k] * g[j]
    return q


def _val(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _descartes(p, a, b):
    """Sign variations of (x+1)^n p((a x + b)/(x + 1)): bounds the roots in (a, b)."""
    n = len(p) - 1
    total = [Fraction(0)] * (n + 1)
    for i, c in enumerate(p):
        term = [c]
        for _ in range(i):
            term = _pmul(term, [b, a])
        for _ in range(n - i):
            term = _pmul(term, [1, 1])
        for k, v in enumerate(term):
            total[k] += v
    signs = [v > 0 for v in total if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def bisection_roots(coeffs, width=Fraction(1, 2 ** 20)):
    """Independent oracle: Descartes isolation, then bisection to ``width``."""
    p = _squarefree(coeffs)
    if len(p) < 2:
        return []
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    out, todo = [], [(-bound, bound)]
    while todo:
        a, b = todo.pop()
        v = _descartes(p, a, b)
        if v == 0:
            continue
        if v == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if _val(p, m) == 0:
            out.append((m, m))
        todo += [(a, m), (m, b)]
    brackets = []
    for a, b in sorted(set(out)):
        # an endpoint may itself be a root: count until both ends are clear of roots
        while a < b and (_val(p, a) == 0 or _val(p, b) == 0):
            m = (a + b) / 2
            if _val(p, m) == 0:
                a = b = m
            elif _descartes(p, a, m) == 1:
                b = m
            else:
                a = m
        while b - a > width:
            m = (a + b) / 2
            vm = _val(p, m)
            if vm == 0:
                a = b = m
            elif (vm > 0) == (_val(p, a) > 0):
                a = m
            else:
                b = m
        brackets.append((a, b))
    return brackets


def test_criterion_3_real_closure_kernel():
    with criterion(3, 30, "real-closure roots vs bisection oracle, order axioms") as st:
        rng = random.Random(3)
        F = RealClosure()
        roots_seen = 0
        width = Fraction(1, 2 ** 20)
        for k in range(500):
            deg = rng.randint(1, 6)
            c = [rng.randint(-20, 20) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
            if k % 10 == 0 and deg <= 4:  # force a repeated root
                r = rng.randint(-3, 3)
                c = _pmul(c, [r * r, -2 * r, 1])
            p = MultiPoly.from_univariate(c)
            got = rc_roots(F, p)
            want = bisection_roots(c)
            assert len(got) == len(want)
            for x, (a, b) in zip(got, want):
                iv = x.refine(width)
                assert iv.width <= width
                lo, hi = max(iv.lo, a), min(iv.hi, b)
                assert lo <= hi
                # a sign change (or zero) on the overlap puts the same root in both brackets
                sq = _squarefree(c)
                assert _val(sq, lo) * _val(sq, hi) <= 0
            roots_seen += len(got)
        G = RealClosure([_e_cut()])
        pool = [G.rational(Fraction(rng.randint(-9, 9), rng.randint(1, 4))) for _ in range(8)]
        pool += [G.generator(0), rc_add(G.generator(0), G.rational(-3))]
        for c in ([-2, 0, 1], [-3, 0, 1], [-1, -1, 1], [1, -3, 0, 1]):
            pool += rc_roots(G, MultiPoly.from_univariate(c))
        for _ in range(1000):
            x, y, z = (rng.choice(pool) for _ in range(3))
            cxy = rc_compare(x, y)
            assert cxy == -rc_compare(y, x)
            if cxy <= 0 and rc_compare(y, z) <= 0:
                assert rc_compare(x, z) <= 0
            assert rc_compare(rc_add(x, z), rc_add(y, z)) == cxy
            if rc_compare(z, G.rational(0)) > 0:
                assert rc_compare(rc_mul(x, z), rc_mul(y, z)) == cxy
        st["detail"] = f"{roots_seen} roots matched"


def _e_cut():
    def fn(s):
        n = s + 3
        lo = sum(Fraction(1, factorial(k)) for k in range(n + 1))
        return lo, lo + Fraction(2, factorial(n + 1))
    return FunctionCut(fn)


# -- 4 ----------------------------------------------------------------------

def test_criterion_4_avoiding_boxes():
    with criterion(4, 20, "root-avoiding boxes, 1000 polynomials at budget 32") as st:
        rng = random.Random(4)
        ok = split = 0
        for _ in range(1000):
            dims = rng.randint(0, 2)
            terms = {}
            while not terms:
                for _ in range(rng.randint(1, 4)):
                    e = tuple(rng.randint(0, 2) for _ in range(dims + 1))
                    terms[e] = rng.randint(-6, 6)
                p = MultiPoly(terms)
                if p.is_zero():
                    terms = {}
            sides = []
            for _ in range(dims + 1):
                lo = Fraction(rng.randint(-300, 300), rng.randint(1, 97))
                sides.append((lo, lo + Fraction(rng.randint(1, 40), rng.randint(7, 211))))
            pre = Box.of(*sides[:dims])
            tgt = RationalInterval(*sides[dims])
            if rng.random() < 0.5:
                # shift p so it vanishes at the centre of the box: success then needs splitting
                centre = [(lo + hi) / 2 for lo, hi in sides]
                v = Fraction(p.evaluate(centre))
                p = p * MultiPoly.const(v.denominator) - MultiPoly.const(v.numerator)
                if p.is_zero():
                    c = centre[dims]
                    p = MultiPoly.var(dims) * MultiPoly.const(c.denominator) - MultiPoly.const(c.numerator)
            try:
                res = find_avoiding_box(p, pre, tgt, 32)
            except NotFound:
                continue
            assert excludes_zero(p, res.box)
            assert pre.contains_box(res.prefix) and tgt.contains_interval(res.interval)
            ok += 1
            split += res.splits > 0
        st["detail"] = f"{ok}/1000 succeeded, {split} after subdividing"
        assert ok >= 990


# -- 5 ----------------------------------------------------------------------

def _sympy_roots(poly):
    x = sympy.Symbol("x")
    return sympy.Poly(sympy.sympify(str(poly).replace("^", "**").replace("X0", "x")), x).real_roots()


def test_criterion_5_sigma2():
    with criterion(5, 30, "sigma2 simulator, 8 indices to stage 60") as st:
        script = CeScript.load(SCRIPTS / "sigma2_mixed.json")
        assert script.horizon == 60 and script.extra["indices"] == 8
        trace, state = run_sigma2(script)
        frozen = [e for e in range(8) if all(s == 0 for s, _ in script.W.get(e, []))]
        growing = [e for e in range(8) if e not in frozen]
        assert len(frozen) == 4 and len(growing) == 4
        last, held = {}, {e: set() for e in range(8)}
        for r in trace.select("interval"):
            iv = RationalInterval(Fraction(r["lo"]), Fraction(r["hi"]))
            if r["e"] in last:
                assert last[r["e"]].contains_interval(iv)
            last[r["e"]] = iv
            held[r["e"]].add(r["n"])
        for e in frozen:
            p = listing_poly(state.index[e])
            assert count_roots(p, last[e]) >= 1
            assert any(last[e].lo < r < last[e].hi for r in _sympy_roots(p))
        for e in growing:
            closed = RationalInterval(last[e].lo, last[e].hi, Bracket.CLOSED)
            for n in held[e] - {state.index[e]}:
                p = listing_poly(n)
                assert count_roots(p, closed) == 0
                assert not any(last[e].lo <= r <= last[e].hi for r in _sympy_roots(p))
        st["detail"] = f"{sum(len(held[e]) - 1 for e in growing)} discarded polynomials excluded"


# -- 6 ----------------------------------------------------------------------

def test_criterion_6_low():
    with criterion(6, 30, "permitting simulator, depth 4, horizon 80") as st:
        redefs = 0
        for seed in range(4):
            trace, state = run_low(low_script(seed, horizon=80, depth=4))
            assert permitting_violations(trace) == []
            assert nesting_violations(trace) == []
            redefs += state.redefinitions(trace)
        trace, state = run_low(low_script(9, horizon=80, depth=4, empty_L=True))
        assert state.redefinitions(trace) == 0
        assert all(r["update"] == "refined" for r in trace.select("active"))
        st["detail"] = f"{redefs} permitted redefinitions"


# -- 7 ----------------------------------------------------------------------

def _tree_precedes(a, b):
    for u, v in zip(a, b):
        if u != v:
            return u == "inf"
    if len(a) == len(b):
        return False
    return a[len(b)] == "inf" if len(a) > len(b) else b[len(a)] == "fin"


def test_criterion_7_nonarch_tree():
    with criterion(7, 30, "non-archimedean tree simulator, horizon 60") as st:
        checked = 0
        for seed in range(3):
            trace, _, _ = run_nonarch_tree(nonarch_script(seed, horizon=60, indices=3, depth=5))
            for r in trace.select("ranks"):
                names = [parse_node(n) for n in r["ranks"]]
                for a in names:
                    for b in names:
                        if a != b:
                            ra, rb = (r["ranks"]["λ" if not n else "/".join(n)] for n in (a, b))
                            assert (ra < rb) == _tree_precedes(a, b)
                checked += 1
            for r in trace.select("placement"):
                actives = [parse_node(a) for a in r["active"]]
                for name in r["unit"] + r["infinitesimal"]:
                    b = parse_node(name)
                    # unit exactly for x_β with β at or to the right of an active α
                    want = any(not _tree_precedes(b, a) for a in actives)
                    assert want == (name in r["unit"])
            assert order_violations(trace) == []
        trace, state, _ = run_nonarch_tree(nonarch_script(0, horizon=60, indices=3, empty=True, depth=5))
        assert trace.select("initialize") == [] and state.initializations == 0
        st["detail"] = f"{checked} stage orders checked"


# -- 8 ----------------------------------------------------------------------

def test_criterion_8_prime_copies():
    with criterion(8, 10, "prime copy builder, 100 approximations") as st:
        rng = random.Random(8)
        flips = redefs = 0
        for seed in range(100):
            approx = order_approximation(seed, points=rng.randint(1, 6), flips=rng.randint(0, 12))
            pc = build_prime_copy(approx, approx.horizon)
            assert pc.final_order().isomorphic_to(approx.limit())
            for p in approx.points:
                assert pc.redefinitions[p] <= approx.flip_count(p)
            flips += len(approx.flips)
            redefs += sum(pc.redefinitions.values())
        st["detail"] = f"{flips} flips, {redefs} redefinitions"


# -- 9 ----------------------------------------------------------------------

def _element(g, rng):
    x = g.const(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    for _ in range(rng.randint(0, 3)):
        lab = rng.choice(g.order)
        x = x + g.monomial(Fraction(rng.randint(-5, 5), rng.randint(1, 3)), {lab: rng.choice([-2, -1, 1, 2])})
    return x


def test_criterion_9_field_laws():
    with criterion(9, 10, "non-archimedean field laws, 1000 elements") as st:
        rng = random.Random(9)
        g = ValueGroup(["A", "B", "C"])
        xs = [_element(g, rng) for _ in range(1000)]
        finite = 0
        for i in range(1000):
            x, y, z = xs[i], xs[(i + 1) % 1000], xs[(i + 7) % 1000]
            assert x + y == y + x and x * y == y * x
            assert (x + y) + z == x + (y + z) and (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x + (-x) == 0
            if x.terms:
                prod = x * na_inv(x)
                assert prod.terms == {ZERO_EXP: 1}
            c = na_compare(x, y)
            assert c == -na_compare(y, x) and (c == 0) == (x - y == 0)
            if x <= y and y <= z:
                assert x <= z
            assert na_compare(x + z, y + z) == c
            if z > 0:
                assert na_compare(x * z, y * z) == c
            if x > 0 and y > 0:
                assert x * y > 0 and x + y > 0
            if classify(x).finite and classify(y).finite:
                finite += 1
                assert residue(x + y) == residue(x) + residue(y)
                assert residue(x * y) == residue(x) * residue(y)
                if x <= y:
                    assert residue(x) <= residue(y)
            elif classify(x) in (Kind.POS_INFINITE, Kind.NEG_INFINITE):
                with pytest.raises(InfiniteError):
                    residue(x)
        st["detail"] = f"{finite} finite pairs in the residue suite"


# -- 10 ---------------------------------------------------------------------

def _quiet(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = run([str(a) for a in argv])
    return code, buf.getvalue()


def test_criterion_10_determinism(tmp_path):
    with criterion(10, 10, "determinism and verify on every shipped script") as st:
        traces = []
        for path in sorted(SCRIPTS.glob("*.json")):
            kind = path.stem.split("_")[0]
            if kind == "friedberg":
                outs = [_quiet(["friedberg", "--script", path]) for _ in range(2)]
                assert outs[0][0] == 0 and outs[0] == outs[1]
                continue
            pair = []
            for tag in "ab":
                out = tmp_path / f"{path.stem}.{tag}.jsonl"
                code, _ = _quiet(["construct", kind, "--script", path, "--trace-out", out])
                assert code == 0
                pair.append(out.read_bytes())
            assert pair[0] == pair[1], path.name
            traces.append(tmp_path / f"{path.stem}.a.jsonl")
        code, out = _quiet(["verify", *traces])
        assert code == 0 and out.count("PASS") == len(traces)
        for t in traces:
            assert verify_trace(Trace.from_lines(t.read_text().splitlines())).ok
        st["detail"] = f"{len(traces)} traces byte-identical and verified"

