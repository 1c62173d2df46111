"""Non-archimedean real closed fields built from a residue field and a derived order."""

from .series import (
    TRUNCATION, ClassComparison, DerivedOrder, InfiniteError, Kind, MultClass, NonArchElement,
    TruncationOverflow, ValueGroup, classify, derived_order, exp_of, mult_class_compare, na_add,
    na_compare, na_inv, na_mul, na_root, residue, same_class,
)

__all__ = [
    "TRUNCATION", "ClassComparison", "DerivedOrder", "InfiniteError", "Kind", "MultClass",
    "NonArchElement", "TruncationOverflow", "ValueGroup", "classify", "derived_order", "exp_of",
    "mult_class_compare", "na_add", "na_compare", "na_inv", "na_mul", "na_root", "residue", "same_class",
]

from .prime import Flip, Node, OrderApproximation, PrimeCopy, build_prime_copy  # noqa: E402

__all__ += ["Flip", "Node", "OrderApproximation", "PrimeCopy", "build_prime_copy"]
