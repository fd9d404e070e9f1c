"""Multiplicative deconvolution with Mellin transforms.

Spectral cut-off estimators of a density or survival function from
observations ``Y = X * U``, a data-driven choice of the cut-off, and a
Monte Carlo harness for the standard simulation configurations.
"""
from .distributions import (Beta, DistSpec, Gamma, LogNormal, MomentDomainError, Pareto,
                            Weibull, analytic_mellin, analytic_mellin_fn, make_dist)
from .empirical import (ThresholdMask, empirical_mellin, mx_hat, mx_tilde, sigma_hat_sq,
                        threshold_mask)
from .estimators import (CurveEstimate, density_known, density_unknown, estimate,
                         survival_known, survival_unknown)
from .mellin_core import (MellinFn, TGrid, WeightFn, default_tgrid, l2_norm_sq,
                          make_tgrid, mellin_inverse, mellin_numeric)
from .selection import PenaltyConfig, SelectionResult, select_known, select_unknown
from .simulation import ExperimentReport, ExperimentSpec, preset, run_experiment

__version__ = "0.1.0"

__all__ = [
    "Beta", "DistSpec", "Gamma", "LogNormal", "MomentDomainError", "Pareto", "Weibull",
    "analytic_mellin", "analytic_mellin_fn", "make_dist",
    "ThresholdMask", "empirical_mellin", "mx_hat", "mx_tilde", "sigma_hat_sq",
    "threshold_mask",
    "CurveEstimate", "density_known", "density_unknown", "estimate", "survival_known",
    "survival_unknown",
    "MellinFn", "TGrid", "WeightFn", "default_tgrid", "l2_norm_sq", "make_tgrid",
    "mellin_inverse", "mellin_numeric",
    "PenaltyConfig", "SelectionResult", "select_known", "select_unknown",
    "ExperimentReport", "ExperimentSpec", "preset", "run_experiment",
]
