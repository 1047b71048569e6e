"""Exact laws, limit theorems and Monte Carlo checks for collecting pairs.

Symbols 1..n are drawn uniformly with replacement; the pair ``jj`` is
collected when two consecutive draws both equal ``j``.
"""

from .combinatorics import binomial, chebyshev_closed, chebyshev_sum, harmonic, harmonic_asym, run_counts
from .distributions import (
    charfn_Y,
    moments_M,
    moments_S,
    moments_S_asym,
    moments_Y,
    pmf_X,
    pmf_Y,
    roots,
    tail_X,
    tail_Y,
)
from .limitlaws import (
    LimitLaw,
    Normalization,
    Regime,
    cdf_erlang,
    cdf_gumbel_kth,
    cdf_std_normal,
    cf_limit_fixed_k,
    dprime_diagnostic,
    ks_distance,
    ks_two_sample,
    normalization_for,
    scaled_tail_limit,
    tail_asym_Y,
)
from .oracle import enumerate_laws, recurrence_pmf_Y
from .simulate import EmpiricalSample, SimConfig, Target, normalize_sample, run_experiment, sample_Y_inversion, simulate_process

__version__ = "0.1.0"
