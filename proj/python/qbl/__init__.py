"""Random real quadrics: GOE sampling, Betti numbers, pencils and experiments."""

import json

from ._core import (
    DEFAULT_SEED,
    NumericFailure,
    SampleDiscarded,
    UnsupportedConfiguration,
    __version__,
    band_volume,
    betti_one_quadric,
    betti_two_quadrics,
    c_n_exact,
    eigenvalues,
    gap_probability,
    haar_rotation,
    inertia,
    integral_geometry_check,
    sample_goe,
    scan_pencil,
    semicircle_cdf,
    spectral_variety_count,
)
from ._core import run_experiment_json as _run_experiment_json


def run_experiment(kind, n_list, trials, seed=DEFAULT_SEED, threads=1, method="spectral", eps=0.02):
    """Run an experiment; returns (report dict, csv text)."""
    text, csv = _run_experiment_json(kind, list(n_list), trials, seed, threads, method, eps)
    return json.loads(text), csv


__all__ = [
    "DEFAULT_SEED",
    "NumericFailure",
    "SampleDiscarded",
    "UnsupportedConfiguration",
    "__version__",
    "band_volume",
    "betti_one_quadric",
    "betti_two_quadrics",
    "c_n_exact",
    "eigenvalues",
    "gap_probability",
    "haar_rotation",
    "inertia",
    "integral_geometry_check",
    "run_experiment",
    "sample_goe",
    "scan_pencil",
    "semicircle_cdf",
    "spectral_variety_count",
]
