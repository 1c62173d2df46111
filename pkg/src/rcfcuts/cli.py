"""Command-line front end.

Exit codes: 0 ok, 2 input error, 3 internal invariant breach, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .constructions import (
    CeScript, Trace, TraceFormatError, run_low, run_nonarch_tree, run_prime, run_sigma2, true_path,
    verify_trace,
)
from .constructions import samples
from .cuts import (
    BudgetExceeded, CutKind, CutStream, FunctionCut, NestingViolation, RationalCut, ScriptedCut,
    ScriptExhausted, realize_approx,
)
from .enumeration import CutEnumeration, SetScript, cut_to_set, friedberg, set_real, set_to_cut
from .exactnum.interval import RationalInterval, fmt_q, parse_q
from .exactnum.sturm import isolate_all, refine_root
from .nonarch.prime import OrderApproximation

OK, INPUT_ERROR, INVARIANT_BREACH, VERIFY_FAILED = 0, 2, 3, 4
KINDS = ("sigma2", "low", "nonarch", "prime")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    horizon: int | None = None
    eps: Fraction = Fraction(1, 10 ** 6)
    budget: int = 1024
    trace_out: str | None = None
    verify: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.horizon is not None and self.horizon < 1:
            raise InputError("--horizon must be at least 1")
        if self.eps <= 0:
            raise InputError("--eps must be positive")


# -- cut specifications ---------------------------------------------------

def algebraic_cut(coeffs: list[int], index: int = -1) -> CutStream:
    """Cut of the ``index``-th real root (ascending) of ``sum coeffs[i] X^i``."""
    roots = isolate_all(coeffs)
    if not roots:
        raise InputError(f"polynomial {coeffs} has no real root")
    try:
        hist = [refine_root(coeffs, roots[index], 1)]
    except IndexError:
        raise InputError(f"polynomial {coeffs} has {len(roots)} real roots; index {index} out of range") from None

    def produce(stage: int):
        # width at most 2^-stage, and strictly nested
        while len(hist) <= stage:
            prev = hist[-1]
            hist.append(refine_root(coeffs, prev, min(prev.width / 2, Fraction(1, 2 ** len(hist)))))
        return hist[stage].lo, hist[stage].hi

    return FunctionCut(produce, source="algebraic")


def parse_cut(spec) -> CutStream:
    """Accepts ``sqrtN``, a rational ``p/q``, ``root:c0,c1,...[#k]`` or the dict forms of those."""
    if isinstance(spec, dict):
        if "rational" in spec:
            return RationalCut(parse_q(str(spec["rational"])), CutKind(spec.get("kind", "strict")))
        if "sqrt" in spec:
            return algebraic_cut([-int(spec["sqrt"]), 0, 1])
        if "root" in spec:
            return algebraic_cut([int(c) for c in spec["root"]], int(spec.get("index", -1)))
        if "intervals" in spec:
            return ScriptedCut(spec["intervals"], CutKind(spec.get("kind", "strict")), bool(spec.get("frozen", True)))
        raise InputError(f"unknown cut specification {spec!r}")
    spec = str(spec).strip()
    if m := re.fullmatch(r"sqrt(\d+)", spec):
        n = int(m.group(1))
        return algebraic_cut([-n, 0, 1])
    if m := re.fullmatch(r"root:([-\d,\s]+)(?:#(-?\d+))?", spec):
        return algebraic_cut([int(c) for c in m.group(1).split(",")], int(m.group(2) or -1))
    try:
        return RationalCut(parse_q(spec))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read cut {spec!r}") from None


# -- commands -------------------------------------------------------------

def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not JSON ({exc.msg} at line {exc.lineno})") from None


def _script(cfg: RunConfig, kind: str):
    if not cfg.inputs:
        make = {"sigma2": samples.sigma2_script, "low": samples.low_script,
                "nonarch": samples.nonarch_script, "prime": samples.order_approximation}[kind]
        return make(cfg.seed)
    data = _load_json(cfg.inputs[0])
    if kind == "prime":
        return OrderApproximation.from_json(data)
    return CeScript.from_json(data)


def _late_changes(trace: Trace, e: int, horizon: int) -> int:
    cut = horizon - horizon // 3
    return sum(1 for r in trace.select("discard") if r["e"] == e and r["stage"] > cut)


def summarize(kind: str, trace: Trace, state, horizon: int) -> list[str]:
    out = [f"{kind}: {horizon} stages, {len(trace)} records"]
    if kind == "sigma2":
        for e in sorted(state.intervals):
            late = _late_changes(trace, e, horizon)
            flag = ("algebraic (stable)" if late == 0 else
                    "changing (stable)" if late >= 2 else "undetermined (horizon-limited)")
            iv = state.intervals[e]
            out.append(f"e={e} {flag} I=({fmt_q(iv.lo)}, {fmt_q(iv.hi)}) n={state.index[e]} "
                       f"changes={len(state.held[e]) - 1}")
        esc = trace.select("escape")
        out.append(f"{len(esc)} avoidance escapes")
    elif kind == "low":
        out.append(f"{state.redefinitions(trace)} redefinitions")
        for m in sorted(state.a):
            out.append(f"C_{m}: ({fmt_q(state.a[m][-1])}, {fmt_q(state.b[m][-1])})")
    elif kind == "nonarch":
        out.append(f"{state.initializations} initializations")
        for p in true_path(trace):
            out.append(f"path level {p.level}: {p.node} ({p.flag})")
    else:
        final = trace.select("final")[0]
        out.append("derived order: " + " < ".join(final["derived"]))
        out.append("redefinitions: " + ", ".join(f"{p}={n}" for p, n in final["redefinitions"].items()))
    return out


def cmd_construct(kind: str, cfg: RunConfig) -> int:
    if kind not in KINDS:
        raise InputError(f"unknown construction {kind!r}; choose from {', '.join(KINDS)}")
    script = _script(cfg, kind)
    if kind == "prime":
        trace, state = run_prime(script, cfg.horizon)
        horizon = trace.select("script")[0]["stages"]
    else:
        horizon = cfg.horizon or script.horizon
        if kind == "sigma2":
            trace, state = run_sigma2(script, horizon, avoid_budget=min(cfg.budget, 32))
        elif kind == "low":
            trace, state = run_low(script, horizon)
        else:
            trace, state, _ = run_nonarch_tree(script, horizon)
    text = trace.text()
    if cfg.trace_out == "-":
        sys.stdout.write(text)
    elif cfg.trace_out:
        Path(cfg.trace_out).write_text(text)
    if cfg.trace_out != "-":
        print("\n".join(summarize(kind, trace, state, horizon)))
    if cfg.verify:
        rep = verify_trace(Trace.from_lines(text.splitlines()))
        print(rep.text(), file=sys.stderr if cfg.trace_out == "-" else sys.stdout)
        if not rep.ok:
            return VERIFY_FAILED
    return OK


def cmd_verify(cfg: RunConfig) -> int:
    if not cfg.inputs:
        raise InputError("verify needs a trace path")
    worst = OK
    for path in cfg.inputs:
        try:
            trace = Trace.read(path)
        except FileNotFoundError:
            raise InputError(f"no such file: {path}") from None
        rep = verify_trace(trace)
        print(f"{path}: {rep.text()}")
        if not rep.ok:
            worst = VERIFY_FAILED
    return worst


def cmd_bridge(cfg: RunConfig) -> int:
    for arg in cfg.inputs:
        try:
            s = SetScript.from_json(arg if arg.lstrip().startswith("{") else Path(arg).read_text())
        except (KeyError, TypeError, json.JSONDecodeError, FileNotFoundError) as exc:
            raise InputError(f"cannot read set script {arg!r}: {exc}") from None
        cut = set_to_cut(s)
        back = [n for n in range(s.N + 2) if cut_to_set(cut, n, cfg.budget)]
        print(fmt_q(set_real(s)))
        print(f"cut: {cut.kind.value}-leaning" if cut.kind is not CutKind.STRICT else "cut: strict")
        print(f"members below {s.N + 2}: {json.dumps(back)}")
    return OK


def cmd_friedberg(cfg: RunConfig) -> int:
    if not cfg.inputs:
        raise InputError("friedberg needs --script")
    data = _load_json(cfg.inputs[0])
    specs = data.get("cuts") if isinstance(data, dict) else data
    if not isinstance(specs, list):
        raise InputError("friedberg script needs a list of cuts")
    src = CutEnumeration([parse_cut(c) for c in specs])
    steps = cfg.horizon or (int(data.get("steps", 64)) if isinstance(data, dict) else 64)
    res = friedberg(src, steps)
    for line in res.log_lines():
        print(line)
    print(json.dumps({"back_map": {str(k): v for k, v in sorted(res.back_map.items())}, "steps": res.steps_run}))
    return OK


def cmd_realize(cfg: RunConfig) -> int:
    for target in cfg.inputs:
        c = parse_cut(target)
        q = realize_approx(c, cfg.eps, cfg.budget)
        iv: RationalInterval = c.latest()
        print(fmt_q(q))
        print(f"decimal: {float(q):.17g}")
        print(f"interval: ({fmt_q(iv.lo)}, {fmt_q(iv.hi)}) width < {fmt_q(cfg.eps)}")
    return OK


# -- argument parsing -----------------------------------------------------

def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(INPUT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--script", help="input script (JSON)")
    common.add_argument("--horizon", type=int, help="number of stages to run")
    common.add_argument("--eps", type=_fraction, default=Fraction(1, 10 ** 6), help="target width (realize)")
    common.add_argument("--budget", type=int, default=1024, help="stage or search budget")
    common.add_argument("--seed", type=int, default=0, help="seed for generated scripts when --script is omitted")
    common.add_argument("--trace-out", help="write the JSON-lines trace here ('-' for stdout)")
    common.add_argument("--verify", action="store_true", help="verify the trace after constructing it")

    p = _Parser(prog="rcfcuts", description="Cut-based real closed field constructions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("construct", parents=[common], help="run a stage simulator on a script")
    c.add_argument("kind", choices=KINDS)
    v = sub.add_parser("verify", parents=[common], help="re-check a trace offline")
    v.add_argument("traces", nargs="+")
    b = sub.add_parser("bridge", parents=[common], help="real number and cut of a set script")
    b.add_argument("sets", nargs="+", help="inline JSON or a path")
    sub.add_parser("friedberg", parents=[common], help="deduplicate an enumeration of cuts")
    r = sub.add_parser("realize", parents=[common], help="rational approximation of a cut")
    r.add_argument("targets", nargs="+", help="sqrtN, p/q or root:c0,c1,...[#k]")
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else INPUT_ERROR
    inputs = {"verify": getattr(args, "traces", None), "bridge": getattr(args, "sets", None),
              "realize": getattr(args, "targets", None)}.get(args.command) or ([args.script] if args.script else [])
    try:
        cfg = RunConfig(args.command, list(inputs), args.horizon, args.eps, args.budget, args.trace_out,
                        args.verify, args.seed)
        if args.command == "construct":
            return cmd_construct(args.kind, cfg)
        return {"verify": cmd_verify, "bridge": cmd_bridge, "friedberg": cmd_friedberg,
                "realize": cmd_realize}[args.command](cfg)
    except (InputError, TraceFormatError, ScriptExhausted, BudgetExceeded, ValueError, KeyError, TypeError) as exc:
        print(f"rcfcuts: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (AssertionError, NestingViolation) as exc:
        print(f"rcfcuts: internal invariant breach: {exc}", file=sys.stderr)
        return INVARIANT_BREACH


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
