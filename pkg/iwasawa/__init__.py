"""
Iwasawa Library

Exact arithmetic in the finite-level Iwasawa algebras Lambda_n = Z_p[T]/(omega_n)
and in truncated Z_p[[T]], with mu/lambda invariants, the sharp/flat matrices
H_n and synthetic theta families.

Usage:
    from iwasawa import LambdaRing, invariants, q

    ring = LambdaRing.for_levels(p=5, N=20, n_max=4)
    phi = ring.cyclo_phi(2).reduce_to_level(2)
    print(invariants(phi))          # mu=0 lambda=20
    print([q(n, 5) for n in range(5)])
"""

from .algebra import (
    FiniteLevelElt,
    LambdaRing,
    SeriesElt,
    element_from_dict,
    from_group_coeffs,
    involution,
    involution_series,
    lift_to_level,
    norm_xi,
    project,
    reduce_to_level,
    to_group_coeffs,
)
from .invariants import (
    invariants,
    invariants_series,
    lambda_invariant,
    make_with_invariants,
    mu,
    mu_group_basis,
    q,
)
from .padic import PAdicScalar, companion_root, invert_unit, unit_root, valuation
from .sprung import (
    LambdaMatrix2x2,
    apply_h,
    b_matrix,
    c_matrix,
    expected_h_matrix,
    h_matrices,
    h_matrix,
)
from .theta import (
    StabilizedFamily,
    ThetaFamily,
    build_nonordinary_family,
    build_ordinary_family,
    finite_level_lp,
    ordinary_lp_approx,
    parity_prediction,
    sharp_flat_lp,
    stabilize,
    stabilize_family,
    threshold_level,
    verify_nonordinary_theorem,
    verify_ordinary_theorem,
    verify_three_term,
)
from .types import (
    ElementParseError,
    InvariantResult,
    IwasawaError,
    LevelRow,
    NonUnitError,
    OrdinarityError,
    ParameterMismatchError,
    PrecisionExhaustedError,
    TheoremReport,
    ThreeTermReport,
    TruncationError,
)

__version__ = "0.1.0"
__all__ = [
    "ElementParseError",
    "FiniteLevelElt",
    "InvariantResult",
    "IwasawaError",
    "LambdaMatrix2x2",
    "LambdaRing",
    "LevelRow",
    "NonUnitError",
    "OrdinarityError",
    "PAdicScalar",
    "ParameterMismatchError",
    "PrecisionExhaustedError",
    "SeriesElt",
    "StabilizedFamily",
    "TheoremReport",
    "ThetaFamily",
    "ThreeTermReport",
    "TruncationError",
    "apply_h",
    "b_matrix",
    "build_nonordinary_family",
    "build_ordinary_family",
    "c_matrix",
    "companion_root",
    "element_from_dict",
    "expected_h_matrix",
    "finite_level_lp",
    "from_group_coeffs",
    "h_matrices",
    "h_matrix",
    "invariants",
    "invariants_series",
    "invert_unit",
    "involution",
    "involution_series",
    "lambda_invariant",
    "lift_to_level",
    "make_with_invariants",
    "mu",
    "mu_group_basis",
    "norm_xi",
    "ordinary_lp_approx",
    "parity_prediction",
    "project",
    "q",
    "reduce_to_level",
    "sharp_flat_lp",
    "stabilize",
    "stabilize_family",
    "threshold_level",
    "to_group_coeffs",
    "unit_root",
    "valuation",
    "verify_nonordinary_theorem",
    "verify_ordinary_theorem",
    "verify_three_term",
]
