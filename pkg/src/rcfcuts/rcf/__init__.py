"""Real closures of finitely generated fields and their cuts."""

from .field import (
    DivisionByZero, Generator, RcfElement, RealClosure, RefinementError,
    rc_add, rc_compare, rc_inv, rc_mul, rc_neg, rc_roots,
)

__all__ = [
    "DivisionByZero", "Generator", "RcfElement", "RealClosure", "RefinementError",
    "rc_add", "rc_compare", "rc_inv", "rc_mul", "rc_neg", "rc_roots",
]

from .basis import DependenceApproximator, GuidedCut, extract_basis  # noqa: E402
from .listing import FieldListing, enumerate_field_cuts  # noqa: E402

__all__ += ["DependenceApproximator", "FieldListing", "GuidedCut", "enumerate_field_cuts", "extract_basis"]
