"""Exact verification engine for half-derivations and transposed Poisson
structures on four Z^2-graded Lie algebras (Virasoro-like and quantum-torus,
at generic q and at a primitive root of unity)."""

from .algebra import (
    AlgebraSpec,
    JacobiReport,
    TAG_D,
    TAG_L,
    TAG_X,
    TORUS_GENERIC,
    TORUS_ROOT,
    UnsupportedVariantError,
    VARIANTS,
    VIRASORO_GENERIC,
    VIRASORO_ROOT,
    Window,
    det2,
    jacobi_check,
    lemma41_relations,
)
from .halfderiv import (
    ConstraintSystem,
    InvalidInteriorError,
    InvalidShiftError,
    NullspaceBasis,
    ShiftSolver,
    UnknownLayout,
    build_constraints,
    candidate_vector,
    identity_candidate,
    interior_dimension,
    nullspace,
    shift_sweep,
    shifted_identity,
    thm_f_family,
    thm_h_family,
    torus_generic_family,
    verify_candidate,
)
from .scalars import (
    CycloElem,
    CyclotomicField,
    GenericQField,
    Rational,
    as_rational,
    cyclotomic_polynomial,
    parse_scalar,
    scalar_to_str,
)
from .tpa import (
    InvalidCenterVectorError,
    ProductTable,
    rank_one_center_product,
    thmG_check,
    triviality_probe,
    verify_axioms,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "ConstraintSystem",
    "CycloElem",
    "CyclotomicField",
    "GenericQField",
    "InvalidCenterVectorError",
    "InvalidInteriorError",
    "InvalidShiftError",
    "JacobiReport",
    "NullspaceBasis",
    "ProductTable",
    "Rational",
    "ShiftSolver",
    "UnknownLayout",
    "UnsupportedVariantError",
    "Window",
    "as_rational",
    "build_constraints",
    "candidate_vector",
    "cyclotomic_polynomial",
    "det2",
    "identity_candidate",
    "interior_dimension",
    "jacobi_check",
    "lemma41_relations",
    "nullspace",
    "parse_scalar",
    "rank_one_center_product",
    "scalar_to_str",
    "shift_sweep",
    "shifted_identity",
    "thmG_check",
    "thm_f_family",
    "thm_h_family",
    "torus_generic_family",
    "triviality_probe",
    "verify_axioms",
    "verify_candidate",
]
