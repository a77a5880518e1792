"""Representation functions of binary quadratic forms and their linear correlations."""
from .correlation import (
    AffineSystem,
    Box,
    ap_average,
    beta_inf,
    build_wtrick,
    empirical_sum,
    normalized_rep,
    predict_and_compare,
    validate_system,
)
from .forms import FormClass, QuadForm, classify, normalize_indefinite, reduce_definite
from .localdensities import beta_p, build_density_table, rho, singular_series
from .numtheory import divisor_sum_chi, factorize, kronecker
from .repcount import build_rep_table, count_rep, count_rep_definite, count_rep_indefinite
from .unitcone import automorph_of, fundamental_cone, fundamental_pell, orbit_canonicalize, vol_K0

__version__ = "0.1.0"
