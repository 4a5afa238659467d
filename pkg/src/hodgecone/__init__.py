"""Exact rational verification of Hodge splittings, augmented cochain
complexes, curve-singularity delta invariants, and integer index ledgers."""

from .errors import (
    HodgeconeError,
    InvariantViolation,
    StabilizationError,
    ValidationError,
)
from .linalg import (
    GramForm,
    Matrix,
    Subspace,
    gram_adjoint,
    image_basis,
    kernel_basis,
    orthogonal_projector,
    solve,
)
from .complexes import (
    CochainComplex,
    HodgeSplit,
    cohomology_dim,
    cohomology_dims,
    euler_characteristic,
    harmonic_projector,
    hodge_decompose,
    laplacian,
)
from .cones import (
    AugmentationData,
    AugmentedComplex,
    build_deformed_complex,
    build_tilde_complex,
    chain_map_m,
    chain_map_m_inverse,
    iso_restricted_d,
    verify_chain_maps,
    verify_cohomology_match,
)
from .singularities import (
    CurveSingularity,
    DeltaResult,
    PuiseuxBranch,
    delta_bruteforce,
    delta_semigroup,
    delta_stabilized,
    intersection_multiplicity,
)
from .riemann_roch import (
    IndexLedger,
    PlaneCurveData,
    chi_via_ledger,
    chi_via_ledger_alternative,
    curve_chi,
    plane_curve_report,
)
from .models import ModelSpec, SplitMix64, build_model, verify_model

__version__ = "0.1.0"
