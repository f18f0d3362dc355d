"""Exact resolution invariants, weighted centers and weighted blow-up charts over Q."""

from .errors import (ContractError, ParseError, ResourceError, StructuralError,
                     VerificationError, WresError)
from .exactalg import CoordChange, Derivation, Poly
from .filtration import Block, WFiltration, theta_enumerate, theta_successor
from .invariant import (Invariant, InvariantResult, Termination, compute_invariant,
                        denominator_bound, diff_correction, integerize, lex_compare)
from .parsing import parse_point, parse_poly, parse_vars

__all__ = [
    "Block", "ContractError", "CoordChange", "Derivation", "Invariant", "InvariantResult",
    "ParseError", "Poly", "ResourceError", "StructuralError", "Termination",
    "VerificationError", "WFiltration", "WresError", "compute_invariant",
    "denominator_bound", "diff_correction", "integerize", "lex_compare", "parse_point",
    "parse_poly", "parse_vars", "theta_enumerate", "theta_successor",
]
