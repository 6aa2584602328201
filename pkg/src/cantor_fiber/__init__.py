"""Codings, fiber sets and dimensions for intersections of a middle Cantor set
with its translates, parametrized by the contraction ratio λ ∈ (0, 1/3]."""
from .coding import CodingResult, e_lambda_cover, membership, phi_t_digits
from .dimension import (DimensionReport, intersection_dims, level_set_dim, local_dim_lambda_set,
                        moran_dim, sigma_generate, sigma_lower_bound)
from .fiberset import IntervalCover, box_count_estimate, lambda_cover, psi_samples
from .projection import classify_monotonicity, critical_lambda, phi_value, pi_derivative, pi_eval
from .reals import RealScalar, precision
from .seqcore import PeriodicCoding
from .solver import lambda_diamond, lambda_extremes, solve_lambda, tau

__all__ = [
    "CodingResult", "DimensionReport", "IntervalCover", "PeriodicCoding", "RealScalar",
    "box_count_estimate", "classify_monotonicity", "critical_lambda", "e_lambda_cover",
    "intersection_dims", "lambda_cover", "lambda_diamond", "lambda_extremes", "level_set_dim",
    "local_dim_lambda_set", "membership", "moran_dim", "phi_t_digits", "phi_value",
    "pi_derivative", "pi_eval", "precision", "psi_samples", "sigma_generate",
    "sigma_lower_bound", "solve_lambda", "tau",
]
