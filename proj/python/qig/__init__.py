"""Quantum Fisher information, reverse estimation and divergences."""

import json as _json

from . import _core
from ._core import (
    InvalidArgument,
    NotReverseEstimableError,
    QigError,
    RankDeficientError,
    RldExistenceError,
    TruncationError,
    coherent_convention,
    gaussian_rld_fisher,
    global_commutation_check,
    kl,
    km_fisher,
    min_trace_oracle,
    multiparam_bounds,
    random_density,
    random_traceless_hermitian,
    rld,
    rld_divergence,
    rld_divergence_integral,
    rld_fisher,
    sld,
    sld_fisher,
    umegaki,
    validate_random_reverse_estimate,
)


def local_reverse_estimate(rho, tangent):
    return _json.loads(_core.local_reverse_estimate(rho, tangent))


def two_point_reverse_estimate(rho, sigma):
    return _json.loads(_core.two_point_reverse_estimate(rho, sigma))


def monotone_metric_suite(trials, dims, seed):
    return _json.loads(_core.monotone_metric_suite(trials, list(dims), seed))


def monotone_divergence_suite(trials, dims, seed):
    return _json.loads(_core.monotone_divergence_suite(trials, list(dims), seed))
