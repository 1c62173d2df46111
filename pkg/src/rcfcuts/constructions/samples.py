"""Seeded script generators shared by the command line and the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from ..nonarch.prime import Flip, OrderApproximation, _apply
from .script import CeScript


def _grow(rng: random.Random, horizon: int, density: float, start: int = 0) -> list:
    return [[s, [start + s]] for s in range(1, horizon + 1) if rng.random() < density]


def sigma2_script(seed: int = 0, horizon: int = 60, indices: int = 8) -> CeScript:
    """Half the indices frozen from stage 0, half growing at every stage."""
    rng = random.Random(seed)
    W = {}
    for e in range(indices):
        if e < indices // 2:
            W[str(e)] = [[0, [rng.randrange(100)]]]
        else:
            W[str(e)] = [[s, [s]] for s in range(1, horizon + 1)]
    return CeScript.from_json({"W": W, "horizon": horizon, "indices": indices})


def _s_table(rng: random.Random, horizon: int, cuts: int) -> list:
    table = []
    for _ in range(cuts):
        lo = Fraction(rng.randrange(4))
        hi = lo + 1
        rows = [[rng.randrange(0, 3), str(lo), str(hi)]]
        for s in sorted(rng.sample(range(3, horizon + 1), k=min(4, horizon - 2))):
            w = hi - lo
            lo, hi = lo + w * Fraction(rng.randrange(4), 8), hi - w * Fraction(rng.randrange(4), 8)
            rows.append([s, str(lo), str(hi)])
        table.append(rows)
    return table


def low_script(seed: int = 0, horizon: int = 40, depth: int = 4, empty_L: bool = False) -> CeScript:
    rng = random.Random(seed)
    chips = [[s, rng.randrange(4)] for s in range(1, horizon + 1) if rng.random() < 0.6]
    L = [] if empty_L else [[s, [rng.randrange(64)]] for s in range(1, horizon + 1) if rng.random() < 0.3]
    S = {str(e): _s_table(rng, horizon, 2) for e in range(4)}
    return CeScript.from_json({"W": {}, "L": L, "chips": chips, "horizon": horizon, "depth": depth, "S": S})


def nonarch_script(seed: int = 0, horizon: int = 40, indices: int = 3, empty: bool = False,
                   depth: int | None = 6) -> CeScript:
    rng = random.Random(seed)
    W = {}
    if not empty:
        for e in range(indices):
            density = rng.choice([0.0, 0.1, 0.5])
            W[str(e)] = _grow(rng, horizon, density, 1000 * e)
    d = {"W": W, "horizon": horizon}
    if depth is not None:
        d["depth"] = depth
    return CeScript.from_json(d)


def order_approximation(seed: int = 0, points: int = 6, flips: int = 12) -> OrderApproximation:
    """Adjacent swaps at distinct increasing stages."""
    rng = random.Random(seed)
    pts = [chr(ord("a") + i) for i in range(points)]
    order = list(pts)
    out = []
    stage = 0
    for _ in range(rng.randrange(flips + 1)):
        if points < 2:
            break
        stage += rng.randrange(1, 3)
        i = rng.randrange(points - 1)
        f = Flip(stage, (order[i], order[i + 1]), (order[i + 1], order[i]))
        order = _apply(order, f)
        out.append(f)
    return OrderApproximation(pts, out, stage + 1)
