import math

import numpy as np
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from fracclifft.special import (
    UnsupportedOrderError,
    bessel_j,
    bessel_j_sequence,
    bessel_j_tilde,
    bessel_j_tilde_sequence,
    gamma_fn,
    gegenbauer,
    gegenbauer_all,
    gegenbauer_coefficients,
    gegenbauer_lambda0_scaled,
    laguerre,
    laguerre_coefficients,
)

orders = st.integers(0, 80).flatmap(lambda n: st.sampled_from([n, n + 0.5]))
args = st.floats(0.0, 50.0, allow_nan=False)


# Bessel


def test_bessel_examples():
    assert float(bessel_j(0, 0.0)) == 1.0
    assert float(bessel_j(0.5, math.pi / 2)) == pytest.approx(2 / math.pi, rel=1e-14)
    # ascending series and backward recurrence at the same point
    series = sum((-1) ** k * 5.0 ** (2 * k + 3) / (math.factorial(k) * math.factorial(k + 3)) for k in range(60))
    assert float(bessel_j(3, 10.0)) == pytest.approx(series, rel=1e-12)
    assert float(bessel_j(3, 10.0)) == pytest.approx(0.05837937930518666, rel=1e-13)


def test_bessel_negative_orders():
    x = np.linspace(0.1, 30, 40)
    assert np.allclose(bessel_j(-1, x), -sc.jv(1, x), rtol=0, atol=1e-14)
    assert np.allclose(bessel_j(-0.5, x), np.sqrt(2 / (np.pi * x)) * np.cos(x), rtol=0, atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(orders, args)
def test_bessel_matches_scipy(nu, x):
    ref = sc.jv(nu, x)
    got = float(bessel_j(nu, x))
    assert abs(got - ref) <= 1e-12 * max(abs(ref), 1e-3) + 1e-300


def test_bessel_sequence_matches_scipy():
    x = np.linspace(0.1, 50, 500)
    for nu0 in (0, -0.5, 0.5, 1, -1):
        seq = bessel_j_sequence(nu0, 60, x)
        ref = sc.jv(nu0 + np.arange(61)[None, :], x[:, None])
        assert np.max(np.abs(seq - ref)) < 2e-14


def test_bessel_recurrence_residual():
    x = np.linspace(0.1, 50, 500)
    seq = bessel_j_sequence(-1, 42, x)  # orders -1 .. 41
    for k in range(1, 42):
        nu = k - 1
        res = np.abs(seq[:, k - 1] + seq[:, k + 1] - 2 * nu / x * seq[:, k])
        assert np.all(res <= 1e-11 * np.maximum(1, np.abs(seq[:, k])))


@pytest.mark.parametrize("n", range(5))
def test_half_integer_closed_forms(n):
    x = np.linspace(0.2, 40, 200)
    ref = np.sqrt(2 * x / np.pi) * sc.spherical_jn(n, x)
    got = bessel_j(n + 0.5, x)
    assert np.all(np.abs(got - ref) <= 1e-12 * np.maximum(np.abs(ref), 1e-2))


def test_bessel_errors():
    with pytest.raises(UnsupportedOrderError):
        bessel_j(0.3, 1.0)
    with pytest.raises(UnsupportedOrderError):
        bessel_j(-1.5, 1.0)
    with pytest.raises(ValueError):
        bessel_j(1, -1.0)


# regularised Bessel


def test_bessel_tilde_examples():
    assert float(bessel_j_tilde(-0.5, 0.0)) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
    assert float(bessel_j_tilde(0.5, 1.0)) == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1.0), rel=1e-14)
    assert float(bessel_j_tilde(0, 0.0)) == 1.0


@settings(max_examples=100, deadline=None)
@given(st.integers(-1, 40).flatmap(lambda n: st.sampled_from([n, n + 0.5])).filter(lambda v: v >= -0.5))
def test_bessel_tilde_at_zero(nu):
    assert float(bessel_j_tilde(nu, 0.0)) == pytest.approx(1 / (2 ** nu * math.gamma(nu + 1)), rel=1e-13)


def test_bessel_tilde_matches_scipy():
    t = np.concatenate([np.geomspace(1e-8, 1, 30), np.linspace(1, 40, 60)])
    seq = bessel_j_tilde_sequence(-0.5, 20, t)
    for k in range(21):
        nu = -0.5 + k
        ref = sc.jv(nu, t) * t ** (-nu)
        assert np.all(np.abs(seq[:, k] - ref) <= 1e-12 * np.abs(ref) + 1e-14 * np.abs(ref[0]))


def test_bessel_tilde_is_even():
    t = np.linspace(0.1, 10, 20)
    assert np.array_equal(bessel_j_tilde(1.5, -t), bessel_j_tilde(1.5, t))


# Gegenbauer


def test_gegenbauer_examples():
    assert float(gegenbauer(0, 0.7, 0.2)) == 1.0
    assert float(gegenbauer(1, 1, 0.3)) == pytest.approx(0.6, abs=1e-15)
    assert float(gegenbauer(2, 1, 0.5)) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]), st.floats(-1, 1))
def test_gegenbauer_matches_scipy(k, lam, w):
    ref = sc.eval_gegenbauer(k, lam, w)
    assert float(gegenbauer(k, lam, w)) == pytest.approx(ref, rel=1e-11, abs=1e-11)


@pytest.mark.parametrize("k", range(8))
def test_gegenbauer_coefficients(k):
    w = np.linspace(-1, 1, 11)
    poly = sum(c * w ** (k - 2 * n) for n, c in enumerate(gegenbauer_coefficients(k, 1.5)))
    assert np.allclose(poly, gegenbauer(k, 1.5, w), atol=1e-12)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_gegenbauer_generating_function(lam):
    r, w = 0.3, np.linspace(-1, 1, 9)
    total = np.sum(gegenbauer_all(60, lam, w) * r ** np.arange(61), axis=-1)
    assert np.allclose(total, (1 - 2 * r * w + r * r) ** (-lam), rtol=0, atol=1e-10)


def test_gegenbauer_rejects_nonpositive_lambda():
    with pytest.raises(ValueError):
        gegenbauer(2, 0.0, 0.5)
    with pytest.raises(ValueError):
        gegenbauer(2, -0.5, 0.5)


def test_gegenbauer_lambda0_examples():
    assert float(gegenbauer_lambda0_scaled(1, 0.0)) == 2.0
    assert float(gegenbauer_lambda0_scaled(2, math.pi / 2)) == pytest.approx(-1.0, abs=1e-15)
    assert float(gegenbauer_lambda0_scaled(4, math.pi / 3)) == pytest.approx(-0.25, abs=1e-15)
    with pytest.raises(ValueError):
        gegenbauer_lambda0_scaled(0, 0.3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.floats(0, math.pi))
def test_gegenbauer_lambda0_limit(n, theta):
    lam = 1e-6
    approx = float(gegenbauer(n, lam, math.cos(theta))) / lam
    assert abs(float(gegenbauer_lambda0_scaled(n, theta)) - approx) <= 1e-5


# Laguerre


def test_laguerre_examples():
    x = np.linspace(0, 5, 11)
    assert np.all(laguerre(0, 0.5, x) == 1.0)
    assert np.allclose(laguerre(1, 0.5, x), 1.5 - x, atol=1e-15)
    # explicit form: 3 - 6 + 2
    assert float(laguerre(2, 1, 2.0)) == pytest.approx(-1.0, abs=1e-14)
    a, xv = 1.7, 0.8
    explicit = 0.5 * (a + 1) * (a + 2) - (a + 2) * xv + 0.5 * xv * xv
    assert float(laguerre(2, a, xv)) == pytest.approx(explicit, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 20), st.sampled_from([0, 0.5, 1, 1.5, 2, 3, 4.5]), st.floats(0, 30))
def test_laguerre_matches_scipy(j, a, x):
    ref = sc.eval_genlaguerre(j, a, x)
    assert float(laguerre(j, a, x)) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("j,a", [(0, 0), (3, 1), (5, 0.5), (6, 2.5)])
def test_laguerre_coefficients(j, a):
    x = np.linspace(0, 4, 9)
    poly = sum(c * x ** i for i, c in enumerate(laguerre_coefficients(j, a)))
    assert np.allclose(poly, laguerre(j, a, x), rtol=1e-13, atol=1e-13)


def test_laguerre_orthogonality():
    xs, ws = sc.roots_genlaguerre(40, 1.0)
    assert abs(np.sum(ws * laguerre(1, 1, xs) * laguerre(2, 1, xs))) <= 1e-8


# Gamma


def test_gamma_examples():
    assert gamma_fn(1) == 1.0
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma_fn(3.5) == pytest.approx(15 * math.sqrt(math.pi) / 8, rel=1e-14)
    for bad in (0, -1, -4):
        with pytest.raises(ValueError):
            gamma_fn(bad)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 100))
def test_gamma_matches_scipy(x):
    assert gamma_fn(x) == pytest.approx(sc.gamma(x), rel=1e-13)
