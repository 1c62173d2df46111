"""Stage-exact simulators for the three priority constructions and their scripted environment."""

from .low import TreeState, nesting_violations, permitting_violations, run_low
from .nonarch_tree import (
    Fragment, NonarchTreeState, PathEntry, order_violations, placement_violations, run_nonarch_tree,
    true_path,
)
from .prime_copy import prime_violations, run_prime
from .script import CeScript
from .sigma2 import Sigma2State, listing_poly, run_sigma2
from .trace import SCHEMA, Trace, TraceFormatError
from .verify import VerifyReport, verify_trace

__all__ = [
    "SCHEMA", "CeScript", "Fragment", "NonarchTreeState", "PathEntry", "Sigma2State", "Trace",
    "TraceFormatError", "TreeState", "VerifyReport", "listing_poly", "nesting_violations",
    "order_violations", "permitting_violations", "placement_violations", "prime_violations", "run_low", "run_prime",
    "run_nonarch_tree", "run_sigma2", "true_path", "verify_trace",
]
