"""GS basis: lambda-orbits, gauge lifts, the graded basis and its relations."""

from .basis import (
    GSBasis,
    build_gs_basis,
    dual_closed_form_residual,
    eigen_residual,
    fixed_dimension,
    grade_dimensions,
    round_trip_residual,
)
from .canonical import CanonicalBasis, build_canonical_basis
from .gauge import Lift, gauge_candidates, sign_gauge, sign_gauge_fix
from .invariant import (
    InvariantSubalgebra,
    ResolvedBasis,
    classify_cartan,
    identify_invariant_subalgebra,
    resolve_gs_basis,
    expected_invariant_row,
)
from .orbits import OrbitDecomposition, decompose_orbits
from .relations import (
    closed_form_gram,
    closed_form_structure_constants,
    gs_gram,
    gs_structure_constants,
)

__all__ = [
    "CanonicalBasis",
    "GSBasis",
    "InvariantSubalgebra",
    "Lift",
    "OrbitDecomposition",
    "ResolvedBasis",
    "build_canonical_basis",
    "build_gs_basis",
    "classify_cartan",
    "closed_form_gram",
    "closed_form_structure_constants",
    "decompose_orbits",
    "dual_closed_form_residual",
    "eigen_residual",
    "fixed_dimension",
    "gauge_candidates",
    "grade_dimensions",
    "gs_gram",
    "gs_structure_constants",
    "identify_invariant_subalgebra",
    "resolve_gs_basis",
    "round_trip_residual",
    "sign_gauge",
    "sign_gauge_fix",
    "expected_invariant_row",
]
