"""Exact computations with Virasoro representations and the Virasoro vertex algebra."""
from .coeffs import (
    C,
    H,
    Definiteness,
    PolyMatrix,
    ScalarPoly,
    bareiss_det,
    char_poly,
    definiteness,
    format_rational,
    kernel_basis,
    leading_minors,
    parse_rational,
    rank,
)
from .fock import fock_bracket_check, fock_inner, fock_L, heis_act, monomial
from .formal import (
    BiLaurentWindow,
    GradedOperator,
    GuardTooSmall,
    ModeField,
    WindowExhausted,
    delta_identity_suite,
    locality_order,
    normal_ordered,
    nth_product,
    ope_coeffs,
)
from .partitions import partition_count, partitions_of
from .verma import (
    VermaEngine,
    cocycle_check,
    discrete_series,
    gram,
    gram_at,
    kac_det_direct,
    kac_det_formula,
    phi_pq,
    quotient_graded_dims,
    shapovalov,
    singular_vectors,
    unitarity_classify,
    verma_act,
)
from .voa import (
    build_voa,
    borcherds_check,
    classify_state,
    invariant_form_check,
    quotient_voa_dims,
    sl2_check,
    state_field,
    translation_axiom_check,
    vacuum_axiom_check,
)

__version__ = "0.1.0"
