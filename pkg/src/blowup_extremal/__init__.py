"""Exact slope instability and extremal potentials on the blowup of P^n along a line."""

from .errors import (
    DimensionMismatchError,
    DomainError,
    IdentityMismatchError,
    NumericError,
    VanishingDenominatorError,
)
from .exactmath import Poly, RatFunc, SignKind, certify_sign, sturm_root_count
from .intersection import BlowupRing, DivisorClass, is_ample, polarization, seshadri_of_E
from .stability import certify_slope_instability, slope_mu, slope_report
from .extremal import build_profile, compute_constants, ode_residual
from .regularity import epsilon0_search, min_eigenvalue_sample, verify_regularity
from .toric import PotentialModel, abreu_scalar_fd, polytope_for

__all__ = [
    "BlowupRing", "DimensionMismatchError", "DivisorClass", "DomainError",
    "IdentityMismatchError", "NumericError", "Poly", "PotentialModel", "RatFunc",
    "SignKind", "VanishingDenominatorError", "abreu_scalar_fd", "build_profile",
    "certify_sign", "certify_slope_instability", "compute_constants",
    "epsilon0_search", "is_ample", "min_eigenvalue_sample", "ode_residual",
    "polarization", "polytope_for", "seshadri_of_E", "slope_mu", "slope_report",
    "sturm_root_count", "verify_regularity",
]
