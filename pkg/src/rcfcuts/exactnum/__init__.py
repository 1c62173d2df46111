"""Exact rational, interval and polynomial arithmetic."""

from .avoid import Avoidance, NotFound, find_avoiding_box
from .interval import Box, Bracket, RationalInterval, as_fraction, fmt_q, parse_q
from .kernels import BACKEND
from .poly import MultiPoly, eval_box, excludes_zero
from .polyenum import first_polys, poly_enumerate, poly_index, univariate_enumerate
from .qorder import first_in, q_at, q_index
from .sturm import count_roots, has_root_in, isolate_all, refine_root, root_bound, sturm_isolate

__all__ = [
    "Avoidance", "BACKEND", "Box", "Bracket", "MultiPoly", "NotFound", "RationalInterval",
    "as_fraction", "count_roots", "eval_box", "excludes_zero", "find_avoiding_box",
    "first_in", "first_polys", "fmt_q", "has_root_in", "isolate_all", "parse_q",
    "poly_enumerate", "poly_index", "q_at", "q_index", "refine_root", "root_bound",
    "sturm_isolate", "univariate_enumerate",
]
