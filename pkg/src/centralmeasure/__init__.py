"""Simulation and verification tools for ergodic unitarily invariant measures
on infinite Hermitian matrices."""

__version__ = "0.1.0"

from .params import ErgodicParams, params_from_config, truncate_power_tail, validate
from .sampler import CoupledSample, HermitianMinor, haar_column_entry_samples, minor, new_sample, xi_vector
from .measures import AtomicMeasure, Interval, measure_query
from .spectral import (
    EigenDecomposition,
    eig_hermitian,
    lambda_measure,
    lowrank_spectrum,
    normalized_eigvec,
    sigma_measure,
)
from .limits import LimitPack, eigvec_limit, lambda_limit, limit_pack, norm_bound, sigma_limit
from .cayley import UnitaryMinor, cayley, eigen_correspondence, inverse_cayley
from .diagnostics import (
    beta_tail_test,
    charfn_error,
    convergence_run,
    estimate_params,
    moment_mc_check,
    moment_oracle,
    norm_check,
    split_experiment,
)

POWER_TAIL_PRESET = {"c": 1.0, "exponent": 1.0, "tol": 0.01}
