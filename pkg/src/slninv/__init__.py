"""Exact-arithmetic engine for symmetric invariants of sl_n semi-direct products.

The package constructs the Lie algebras q = sl_n |x (m copies of the dual
defining module + k copies of the defining module) over the rationals,
builds their explicit polynomial invariants, certifies invariance and
independence symbolically, computes indices and fundamental semi-invariants,
and decides polynomiality of the algebra of symmetric invariants.

Everything is computed in exact rational arithmetic; no floating point is
used anywhere.
"""

from .config import Caps, DEFAULT_CAPS, CapExceeded
from .poly import Poly, PolyParseError, VarContext, exact_div, try_exact_div
from .gcd import gcd_list, gcd_multi
from .matrix import PolyMatrix
from .liealg import (
    LieAlgebraData,
    SemidirectSpec,
    StabilizerKind,
    GenericStabilizerSpec,
    b_of_q,
    build_semidirect,
    fundamental_semi_invariant,
    generic_stabilizer,
    index_by_rais,
    index_by_rank,
    lie_derivative,
    structure_matrix,
)
from .invariants import (
    InvariantCandidate,
    charpoly_invariants,
    invariant_finder,
    krylov_minor_invariant,
    mixed_parameters,
    mixed_wedge_invariant,
    restricted_krylov_minor,
    restricted_mixed_wedge,
    v_invariant_generators,
)
from .verify import (
    CheckResult,
    VerificationReport,
    check_invariance,
    check_v_invariance_generic,
    divisibility_check,
    jacobian_rank,
    polynomiality_certificate,
    restriction_phi_x,
)
from .classify import ClassificationReport, classify, classification_grid

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "CapExceeded",
    "Poly",
    "PolyParseError",
    "VarContext",
    "PolyMatrix",
    "exact_div",
    "try_exact_div",
    "gcd_multi",
    "gcd_list",
    "SemidirectSpec",
    "LieAlgebraData",
    "StabilizerKind",
    "GenericStabilizerSpec",
    "build_semidirect",
    "structure_matrix",
    "lie_derivative",
    "index_by_rank",
    "index_by_rais",
    "generic_stabilizer",
    "b_of_q",
    "fundamental_semi_invariant",
    "InvariantCandidate",
    "v_invariant_generators",
    "krylov_minor_invariant",
    "restricted_krylov_minor",
    "charpoly_invariants",
    "mixed_parameters",
    "mixed_wedge_invariant",
    "restricted_mixed_wedge",
    "invariant_finder",
    "CheckResult",
    "VerificationReport",
    "check_invariance",
    "check_v_invariance_generic",
    "restriction_phi_x",
    "jacobian_rank",
    "polynomiality_certificate",
    "divisibility_check",
    "ClassificationReport",
    "classify",
    "classification_grid",
]
