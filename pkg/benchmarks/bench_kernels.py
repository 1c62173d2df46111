"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Both backends receive identical seeded inputs; their outputs are checked
for equality before any timing is reported.
"""

from __future__ import annotations

import argparse
import json
import random
import timeit

from rcfcuts.exactnum import _kernels_py as py

try:
    from rcfcuts.exactnum import _kernels as cy
except ImportError:
    cy = None


def workloads(seed: int = 0):
    rng = random.Random(seed)
    polys = [[rng.randint(-50, 50) for _ in range(rng.randint(3, 9))] for _ in range(200)]
    points = [(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6)) for _ in range(200)]
    seqs = [polys[i:i + 6] for i in range(0, 180, 6)]
    terms = []
    for _ in range(60):
        dims = 3
        t = [(rng.randint(-9, 9), tuple(rng.randint(0, 3) for _ in range(dims))) for _ in range(8)]
        lo = [rng.randint(-40, 20) for _ in range(dims)]
        hi = [x + rng.randint(1, 20) for x in lo]
        dens = [rng.randint(1, 16) for _ in range(dims)]
        terms.append((t, lo, hi, dens))
    return {
        "sign_at": lambda k: [k.sign_at(p, n, d) for p, (n, d) in zip(polys, points)],
        "sign_variations": lambda k: [k.sign_variations(s, n, d) for s in seqs for n, d in points[:20]],
        "box_eval": lambda k: [k.box_eval(*args) for args in terms],
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    rows = []
    for name, work in workloads().items():
        t_py = min(timeit.repeat(lambda: work(py), repeat=args.repeat, number=args.number))
        row = {"kernel": name, "python_s": t_py, "cython_s": None, "speedup": None}
        if cy is not None:
            assert work(cy) == work(py), f"backends disagree on {name}"
            t_cy = min(timeit.repeat(lambda: work(cy), repeat=args.repeat, number=args.number))
            row.update(cython_s=t_cy, speedup=t_py / t_cy)
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    if cy is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<16}{'python (s)':>12}{'cython (s)':>12}{'speedup':>9}")
    for r in rows:
        c = "-" if r["cython_s"] is None else f"{r['cython_s']:.4f}"
        x = "-" if r["speedup"] is None else f"{r['speedup']:.2f}x"
        print(f"{r['kernel']:<16}{r['python_s']:>12.4f}{c:>12}{x:>9}")


if __name__ == "__main__":
    main()
