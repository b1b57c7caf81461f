import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm, skew

from fwntest import FunctionalSample, gram
from fwntest.autocov import lag_norms
from fwntest.dgp import DgpSpec, simulate
from fwntest.errors import (
    DegenerateSampleError,
    DegenerateWeightsError,
    FwnError,
    InsufficientDataError,
    InvalidBandwidthError,
    InvalidExponentError,
)
from fwntest.whitenoise import (
    beta_hat_star,
    beta_one_star,
    t_stat,
    t_stat_beta,
    white_noise_test,
)

from oracles import random_sample

HAND = FunctionalSample([1.0, -1.0, 2.0])


def test_hand_example_chain():
    r = t_stat(HAND, "bartlett", 2)
    assert r.q_hat_sq == pytest.approx(0.5, abs=1e-15)
    assert r.sigma2_hat**2 == pytest.approx(4.0, abs=1e-15)
    assert r.cn == pytest.approx(1 / 6, abs=1e-15)
    assert r.dn == pytest.approx(1 / 72, abs=1e-15)
    assert r.cov0_hs_sq == pytest.approx(4.0, abs=1e-15)
    assert r.statistic == pytest.approx(0.125, abs=1e-12)
    assert r.variant == "raw" and r.beta is None
    assert r.p_value == pytest.approx(norm.sf(0.125), abs=1e-15)


def test_beta_one_reduces_to_raw(rng):
    r = t_stat_beta(HAND, "bartlett", 2, 1.0)
    assert r.statistic == pytest.approx(0.125, abs=1e-12)
    for _ in range(10):
        s = random_sample(rng, 30, 4)
        a = t_stat(s, "parzen", 5.5).statistic
        b = t_stat_beta(s, "parzen", 5.5, 1.0).statistic
        assert b == pytest.approx(a, rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.sampled_from([-3.0, -1.0, 0.01, 2.0, 1e3]),
       beta=st.sampled_from([0.2, -0.4, 1.0, 2.5]))
def test_scale_invariance(seed, c, beta):
    s = random_sample(np.random.default_rng(seed), 25, 5)
    for kernel in ("bartlett", "daniell"):
        a = t_stat(s, kernel, 3.0).statistic
        b = t_stat(s.scaled(c), kernel, 3.0).statistic
        assert b == pytest.approx(a, rel=1e-10, abs=1e-10)
        a = t_stat_beta(s, kernel, 3.0, beta).statistic
        b = t_stat_beta(s.scaled(c), kernel, 3.0, beta).statistic
        assert b == pytest.approx(a, rel=1e-10, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), beta=st.sampled_from([None, 0.2, -0.3, 1.7]))
def test_recombination_and_p_value(seed, beta):
    s = random_sample(np.random.default_rng(seed), 20, 3)
    r = t_stat(s, "bartlett", 4.0) if beta is None else t_stat_beta(s, "bartlett", 4.0, beta)
    assert r.recombine() == pytest.approx(r.statistic, rel=1e-10, abs=1e-10)
    assert 0.0 <= r.p_value <= 1.0
    assert r.p_value == pytest.approx(1 - norm.cdf(r.statistic), abs=1e-12)
    rec = r.to_record()
    assert rec["statistic"] == r.statistic and rec["n"] == 20


def test_errors():
    with pytest.raises(DegenerateSampleError):
        t_stat(FunctionalSample(np.zeros((5, 3))), "bartlett", 2)
    with pytest.raises(InvalidBandwidthError):
        t_stat(HAND, "bartlett", 0)
    with pytest.raises(InvalidBandwidthError):
        t_stat(HAND, "bartlett", -1.0)
    with pytest.raises(InsufficientDataError):
        t_stat(FunctionalSample([1.0, 2.0]), "bartlett", 2)
    with pytest.raises(InvalidExponentError):
        t_stat_beta(HAND, "bartlett", 2, 0.0)
    with pytest.raises(DegenerateWeightsError):
        t_stat(HAND, "bartlett", 0.5)
    with pytest.raises(DegenerateWeightsError):
        beta_one_star("bartlett", 50, 0.9)


def test_beta_zero_base_is_degenerate():
    # the two nonzero curves are 3 apart, beyond the lags 1, 2 the window reaches, so Q^2 = 0
    x = np.zeros((6, 2))
    x[0] = [1.0, 0.0]
    x[3] = [0.0, 1.0]
    s = FunctionalSample(x)
    assert t_stat(s, "bartlett", 2.5).q_hat_sq == 0.0
    with pytest.raises(DegenerateSampleError):
        t_stat_beta(s, "bartlett", 2.5, 0.2)


def test_truncated_matches_unweighted_portmanteau():
    s = simulate(DgpSpec("iid_bm", n=2000, m=20, seed=11))
    p = 5
    ln = lag_norms(gram(s), p).values
    n = s.n
    sigma2 = float(np.trace(gram(s))) / n
    t_star = (n * ln[1:].sum() - sigma2**2 * p) / (ln[0] * math.sqrt(2 * p))
    assert t_stat(s, "truncated", p).statistic == pytest.approx(t_star, abs=0.05)


def test_beta_one_star_large_n_bartlett():
    assert beta_one_star("bartlett", 10**5, 1000.0) == pytest.approx(13 / 63, abs=1e-3)


@pytest.mark.parametrize("n", [100, 250])
def test_beta_one_star_bartlett_near_one_fifth(n):
    assert 0.15 <= beta_one_star("bartlett", n, n ** (1 / 3)) <= 0.25


def test_beta_one_star_daniell():
    assert 0.10 <= beta_one_star("daniell", 250, 250 ** 0.2) <= 0.21


def test_beta_hat_scalar_modes():
    s = random_sample(np.random.default_rng(9), 40, 1)
    b1 = beta_one_star("bartlett", 40, 4.0)
    assert beta_hat_star(s, "bartlett", 4.0) == pytest.approx(b1, rel=1e-12)
    k = (1 - b1) / (2 / 3)
    assert beta_hat_star(s, "bartlett", 4.0, mode="literal") == pytest.approx(1 - k / 3, rel=1e-12)
    with pytest.raises(FwnError):
        beta_hat_star(s, "bartlett", 4.0, mode="other")
    with pytest.raises(DegenerateSampleError):
        beta_hat_star(FunctionalSample(np.zeros((4, 2))), "bartlett", 2.0)


def test_beta_hat_iid_bm_bartlett():
    n = 100
    vals = [
        beta_hat_star(simulate(DgpSpec("iid_bm", n=n, m=100, seed=s)), "bartlett", n ** (1 / 3))
        for s in range(40)
    ]
    mean = float(np.mean(vals))
    assert mean < 0
    assert abs(mean - (-1 / 8)) <= 0.15


def test_power_transform_reduces_skewness():
    rng = np.random.default_rng(77)
    n, p = 250, 250 ** (1 / 3)
    raw, tr = [], []
    for _ in range(500):
        s = FunctionalSample(rng.standard_normal(n))
        raw.append(t_stat(s, "bartlett", p).statistic)
        tr.append(t_stat_beta(s, "bartlett", p, 0.2).statistic)
    assert abs(skew(tr)) < abs(skew(raw))


def test_white_noise_test_variants(rng):
    s = random_sample(rng, 60, 5)
    raw = white_noise_test(s, "bartlett", 4.0, "raw")
    assert raw.statistic == t_stat(s, "bartlett", 4.0).statistic
    b1 = white_noise_test(s, "bartlett", 4.0, "beta1")
    assert b1.beta == pytest.approx(beta_one_star("bartlett", 60, 4.0), rel=1e-15)
    bh = white_noise_test(s, "parzen", "fixed", "betahat")
    assert bh.variant == "betahat" and bh.bandwidth == pytest.approx(60 ** 0.2)
    ad = white_noise_test(s, "daniell", "adaptive", "raw")
    assert 2.0 <= ad.bandwidth <= 15.0
    with pytest.raises(FwnError):
        white_noise_test(s, "bartlett", 4.0, "sqrt")
