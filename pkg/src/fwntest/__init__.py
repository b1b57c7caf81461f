"""Spectral white noise test for functional time series."""

from ._backend import BACKEND
from .autocov import GramStatistics, LagNorms, MomentEstimates, cov0_hs_norm_sq, lag_norms, moment_estimates, trace_lags
from .bandwidth import BandwidthResult, adaptive_bandwidth, fixed_bandwidth, resolve_bandwidth
from .dgp import DgpSpec, RngStream, simulate
from .errors import FwnError
from .fspace import FunctionalSample, Grid, GridCurve, center, difference, gram, inner_product
from .kernels import KernelSpec, get_kernel
from .spectral import consistency_constant, parseval_integrals, q_hat_sq, sdo_eval
from .whitenoise import TestResult, beta_hat_star, beta_one_star, t_stat, t_stat_beta, white_noise_test

__version__ = "0.1.0"
