"""Multivariate gamma distributions: Laplace transforms, densities, sampling and checks."""

from ._mvgamma import (
    NumericalError,
    ParseError,
    __version__,
    admissibility_bound,
    best_known_admissibility,
    chi2_lt,
    det_block_factorization,
    empirical_lt,
    factorial_pdf_mc,
    half_chi2_cdf_2d,
    inequality_check,
    log_mv_gamma_fn,
    mvgamma_lt,
    noncentral_gamma_log_pdf,
    noncentral_gamma_pdf,
    rhs_lt_closed,
    rhs_lt_mc,
    sample,
    sylvester_identity,
    theorem1_rhs_pdf,
)

__all__ = [
    "NumericalError",
    "ParseError",
    "__version__",
    "admissibility_bound",
    "best_known_admissibility",
    "chi2_lt",
    "det_block_factorization",
    "empirical_lt",
    "factorial_pdf_mc",
    "half_chi2_cdf_2d",
    "inequality_check",
    "log_mv_gamma_fn",
    "mvgamma_lt",
    "noncentral_gamma_log_pdf",
    "noncentral_gamma_pdf",
    "rhs_lt_closed",
    "rhs_lt_mc",
    "sample",
    "sylvester_identity",
    "theorem1_rhs_pdf",
]
