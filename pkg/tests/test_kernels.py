import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from fwntest.errors import InvalidBandwidthError, UnsupportedKernelError
from fwntest.kernels import KERNELS, cn, constants, dn, evaluate, get_kernel, support_lag, weights

ALL = list(KERNELS)
SMOOTH = ["bartlett", "parzen", "daniell"]


@pytest.mark.parametrize(
    "kernel,x,expected",
    [
        ("bartlett", 0.5, 0.5),
        ("parzen", 0.5, 0.25),
        ("daniell", 1.0, 0.0),
        ("truncated", 1.0, 1.0),
        ("truncated", 1.0000001, 0.0),
        ("bartlett", 1.5, 0.0),
        ("parzen", 1.0, 0.0),
    ],
)
def test_eval_values(kernel, x, expected):
    assert evaluate(kernel, x) == pytest.approx(expected, abs=1e-15)


def test_parzen_branches_agree_at_knot():
    inner = 1 - 6 * 0.25 + 6 * 0.125
    outer = 2 * 0.5**3
    assert inner == outer == evaluate("parzen", 0.5)


def test_daniell_near_zero():
    assert evaluate("daniell", 0.0) == 1.0
    assert evaluate("daniell", 1e-9) == pytest.approx(1.0, abs=1e-12)
    # continuity across the Taylor switch
    z = 1e-4 / math.pi
    below = evaluate("daniell", z * (1 - 1e-9))
    above = evaluate("daniell", z * (1 + 1e-9))
    assert abs(below - above) < 1e-14


@pytest.mark.parametrize("x", [1e-6, 3e-5, 1e-3, 0.1])
def test_daniell_matches_series(x):
    z = math.pi * x
    series = sum((-1) ** k * z ** (2 * k) / math.factorial(2 * k + 1) for k in range(8))
    assert evaluate("daniell", x) == pytest.approx(series, rel=1e-14)


@pytest.mark.parametrize("kernel", ALL)
@given(x=st.floats(-50, 50, allow_nan=False))
def test_kernel_shape_properties(kernel, x):
    v = evaluate(kernel, x)
    assert v == evaluate(kernel, -x)
    assert abs(v) <= 1.0
    assert evaluate(kernel, 0.0) == 1.0


def test_eval_array_shape():
    out = evaluate("parzen", np.linspace(-2, 2, 9))
    assert out.shape == (9,)


def _quad_real_line(f):
    # integrate over [0, inf) piecewise on unit intervals so sinc oscillations are resolved
    total = 0.0
    for a in range(2000):
        total += quad(f, a, a + 1, epsabs=1e-15, limit=200)[0]
    return total


@pytest.mark.parametrize("kernel", ["bartlett", "parzen", "truncated"])
def test_compact_constants_by_quadrature(kernel):
    k = get_kernel(kernel)
    f2 = lambda x: evaluate(k, x) ** 2
    f4 = lambda x: evaluate(k, x) ** 4
    pts = [0.5, 1.0]
    i2 = 2 * quad(f2, 0, 1, points=pts, epsabs=1e-14)[0]
    i4 = quad(f4, 0, 1, points=pts, epsabs=1e-14)[0]
    assert k.int_k2 == pytest.approx(i2, rel=1e-10)
    assert k.d_k == pytest.approx(i4, rel=1e-10)


def test_daniell_constants_by_quadrature():
    k = get_kernel("daniell")
    i2 = 2 * _quad_real_line(lambda x: evaluate(k, x) ** 2)
    i4 = _quad_real_line(lambda x: evaluate(k, x) ** 4)
    # tails decay like x^-2 and x^-4, truncated at 2000
    assert k.int_k2 == pytest.approx(i2, abs=2e-4)
    assert k.d_k == pytest.approx(i4, abs=1e-9)


@pytest.mark.parametrize("kernel", SMOOTH)
def test_xi_is_the_local_limit(kernel):
    q, xi, _, _ = constants(kernel)
    x = 1e-5
    assert (1 - evaluate(kernel, x)) / x**q == pytest.approx(xi, rel=1e-4)


def test_constant_table():
    assert constants("bartlett") == (1, 1.0, 2 / 3, 1 / 5)
    q, xi, k2, d = constants("daniell")
    assert (q, k2, d) == (2, 1.0, 1 / 3)
    assert xi == pytest.approx(1.644934, abs=1e-6)
    q, xi, k2, d = constants("parzen")
    assert (q, xi) == (2, 6.0)
    assert k2 == pytest.approx(0.539286, abs=1e-6)
    t = get_kernel("truncated")
    assert (t.int_k2, t.d_k) == (2.0, 1.0)


def test_truncated_constants_unsupported():
    with pytest.raises(UnsupportedKernelError):
        constants("truncated")


def test_unknown_kernel():
    with pytest.raises(UnsupportedKernelError):
        get_kernel("epanechnikov")


def test_cn_dn_hand_values():
    assert cn("bartlett", 4, 2) == pytest.approx(0.1875, abs=1e-15)
    assert dn("bartlett", 4, 2) == pytest.approx(0.0234375, abs=1e-15)
    assert cn("truncated", 10, 3) == pytest.approx(2.4, abs=1e-14)
    # 0.9*0.8 + 0.8*0.7 + 0.7*0.6
    assert dn("truncated", 10, 3) == pytest.approx(1.70, abs=1e-14)


def test_cn_small_bandwidth_vanishes():
    assert cn("bartlett", 50, 0.5) == 0.0
    assert dn("bartlett", 50, 0.5) == 0.0


def test_weights_reject_nonpositive_bandwidth():
    with pytest.raises(InvalidBandwidthError):
        weights("bartlett", 10, 0.0)


@pytest.mark.parametrize("kernel", ALL)
@given(n=st.integers(3, 400), p=st.floats(0.1, 500))
def test_weight_sum_bounds(kernel, n, p):
    assert 0 <= cn(kernel, n, p) <= n - 1
    assert 0 <= dn(kernel, n, p) <= n - 2


@given(n=st.integers(3, 300), data=st.data())
def test_truncated_cn_closed_form(n, data):
    p = data.draw(st.integers(1, n - 2))
    assert cn("truncated", n, p) == pytest.approx(p - p * (p + 1) / (2 * n), rel=1e-12)


@pytest.mark.parametrize("kernel", SMOOTH + ["truncated"])
def test_weight_sums_scale_with_bandwidth(kernel):
    k = get_kernel(kernel)
    n, p = 10**5, 1000.0
    assert dn(k, n, p) / p == pytest.approx(k.d_k, rel=0.01)
    assert cn(k, n, p) / p == pytest.approx(k.int_k2 / 2, rel=0.01)


def test_support_lag():
    assert support_lag("bartlett", 100, 4.6) == 4
    assert support_lag("parzen", 5, 40) == 4
    assert support_lag("daniell", 100, 3) == 99


@pytest.mark.parametrize("kernel", ["bartlett", "parzen", "truncated"])
def test_weights_vanish_beyond_support(kernel):
    w = weights(kernel, 50, 7.3)
    assert np.all(w[support_lag(kernel, 50, 7.3) + 1 :] == 0)
