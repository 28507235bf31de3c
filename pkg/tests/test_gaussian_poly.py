import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracclifft import gaussian_poly as gp
from fracclifft.clifford import Multivector, algebra
from fracclifft.gaussian_poly import CliffordPolynomial, GaussianPolynomial


def _random_poly(seed, m, degree=3, terms=6):
    rng = np.random.default_rng(seed)
    dim = 1 << m
    out = {}
    for _ in range(terms):
        exps = tuple(int(e) for e in rng.multinomial(int(rng.integers(0, degree + 1)), [1 / m] * m))
        out[exps] = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return CliffordPolynomial(m, out)


polys = st.tuples(st.integers(1, 4), st.integers(0, 2 ** 32 - 1)).map(lambda a: _random_poly(a[1], a[0]))


def _fd_partial(fn, x, j, h=1e-3):
    e = np.zeros_like(x)
    e[j] = h
    return (-fn(x + 2 * e) + 8 * fn(x + e) - 8 * fn(x - e) + fn(x - 2 * e)) / (12 * h)


# algebra of polynomials


def test_construction_and_access():
    p = CliffordPolynomial(2, {(1, 0): 2.0, (0, 1): Multivector.blade(2, 1, 2)})
    assert p.degree() == 1
    assert p.is_homogeneous(1)
    assert p.coeff((1, 0))[0] == 2.0
    assert np.all(p.coeff((3, 3)) == 0)
    with pytest.raises(ValueError):
        CliffordPolynomial(2, {(1,): 1.0})


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1), st.integers(0, 2 ** 32 - 1))
def test_products_evaluate_pointwise(m, s1, s2):
    f, g = _random_poly(s1, m), _random_poly(s2, m)
    x = np.random.default_rng(s1 ^ s2).normal(size=(3, m))
    alg = algebra(m)
    assert np.allclose((f * g).evaluate(x), alg.product(f.evaluate(x), g.evaluate(x)), atol=1e-9)
    assert np.allclose((f + g).evaluate(x), f.evaluate(x) + g.evaluate(x), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_partial_matches_finite_differences(f):
    x = np.random.default_rng(0).normal(size=f.m)
    for j in range(f.m):
        assert np.allclose(f.partial(j).evaluate(x), _fd_partial(f.evaluate, x, j), atol=1e-7)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_degree_bookkeeping(f):
    for exps in f.terms:
        mono = CliffordPolynomial(f.m, {exps: f.coeff(exps)})
        d = gp.dirac_apply(mono)
        assert d.is_zero() or d.is_homogeneous(sum(exps) - 1)
        g = gp.gamma_apply(mono)
        assert g.is_zero() or g.is_homogeneous(sum(exps))


# Dirac, Laplace, Euler


def test_dirac_examples():
    for m in (1, 2, 3, 5):
        d = gp.dirac_apply(CliffordPolynomial.vector_variable(m))
        assert d.allclose(CliffordPolynomial.constant(m, -m))
    z = CliffordPolynomial(2, {(1, 0): 1.0, (0, 1): -algebra(2).basis(3)})
    assert gp.dirac_apply(z).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_dirac_squares_to_minus_laplace(seed):
    f = _random_poly(seed, 3, degree=3)
    assert (gp.dirac_apply(gp.dirac_apply(f)) + gp.laplace_apply(f)).max_abs() <= 1e-13 * max(1, f.max_abs())


def test_laplace_and_euler_examples():
    for m in (2, 4):
        r2 = CliffordPolynomial.norm_squared(m)
        assert gp.laplace_apply(r2).allclose(CliffordPolynomial.constant(m, 2 * m))
    f = _random_poly(3, 3, degree=0) * CliffordPolynomial.coordinate(3, 0) * CliffordPolynomial.coordinate(3, 2)
    assert gp.euler_apply(f).allclose(f * 2)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_anticommutator_with_vector_variable(f):
    m = f.m
    anti = gp.vector_left(gp.dirac_apply(f)) + gp.dirac_apply(gp.vector_left(f))
    assert (anti + gp.euler_apply(f) * 2 + f * m).max_abs() <= 1e-13 * max(1, f.max_abs())


@settings(max_examples=30, deadline=None)
@given(polys)
def test_dirac_gamma_commutation(f):
    m = f.m
    lhs = gp.dirac_apply(gp.gamma_apply(f))
    rhs = gp.dirac_apply(f) * (m - 1) - gp.gamma_apply(gp.dirac_apply(f))
    assert (lhs - rhs).max_abs() <= 1e-12 * max(1, f.max_abs())


@settings(max_examples=30, deadline=None)
@given(polys)
def test_gaussian_operators_match_finite_differences(f):
    g = GaussianPolynomial(f)
    x = np.random.default_rng(1).normal(size=f.m) * 0.7
    alg = algebra(f.m)
    fd = sum(alg.product(alg.basis(1 << j), _fd_partial(g.evaluate, x, j)) for j in range(f.m))
    assert np.allclose(gp.dirac_apply(g).evaluate(x), fd, atol=1e-7)
    fd_right = sum(alg.product(_fd_partial(g.evaluate, x, j), alg.basis(1 << j)) for j in range(f.m))
    assert np.allclose(gp.dirac_right_apply(g).evaluate(x), fd_right, atol=1e-7)


def test_right_actions():
    f = _random_poly(5, 3)
    x = np.array([0.3, -0.2, 0.9])
    alg = algebra(3)
    assert np.allclose(gp.vector_right(f).evaluate(x), alg.product(f.evaluate(x), alg.vector(x)), atol=1e-12)
    assert np.allclose(gp.vector_left(f).evaluate(x), alg.product(alg.vector(x), f.evaluate(x)), atol=1e-12)


def test_oscillator_anticommutator_identity():
    for m in (2, 3):
        g = GaussianPolynomial(_random_poly(m, m))
        d, v = gp.dirac_apply, gp.vector_left
        plus = lambda u: d(u) + v(u)
        minus = lambda u: d(u) - v(u)
        h_x = gp.laplace_apply(g) - sum((g.times_coordinate(j).times_coordinate(j) for j in range(1, m)), g.times_coordinate(0).times_coordinate(0))
        assert (plus(minus(g)) + minus(plus(g)) + h_x * 2).max_abs() <= 1e-12 * g.max_abs()


# Gamma and H


def test_gamma_examples():
    assert gp.gamma_apply(CliffordPolynomial.constant(3, 2.5)).is_zero()
    for m in (2, 3, 4):
        psi10 = gp.psi_basis("odd", 0, 0, m=m)
        assert gp.gamma_apply(psi10).allclose(psi10 * (m - 1))
    for k in range(5):
        for mk in gp.monogenic_m2(k):
            f = gp.psi_basis("even", 0, k, mk)
            assert gp.gamma_apply(f).allclose(f * (-k))


def test_gamma_commutes_with_radial_factor():
    f = _random_poly(11, 3)
    r2 = CliffordPolynomial.norm_squared(3)
    assert (gp.gamma_apply(r2 * f) - r2 * gp.gamma_apply(f)).max_abs() <= 1e-12 * f.max_abs()


def test_hamiltonian_examples():
    for m in (1, 2, 4):
        g0 = gp.psi_basis("even", 0, 0, m=m)
        assert gp.hamiltonian_apply(g0).max_abs() == 0
    f = gp.psi_basis("even", 1, 0, m=2)
    assert gp.hamiltonian_apply(f).allclose(f * 2)
    f = gp.psi_basis("odd", 0, 1, gp.monogenic_m2(1)[0])
    assert gp.hamiltonian_apply(f).allclose(f * 2)
    f = gp.psi_basis("odd", 0, 0, m=2)
    assert gp.hamiltonian_apply(f).allclose(f * 1)
    with pytest.raises(TypeError):
        gp.hamiltonian_apply(CliffordPolynomial.constant(2))


@pytest.mark.parametrize("m", [2, 3, 4])
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_eigenrelations(m, parity):
    for j in range(4):
        for k in range(4):
            for mk in gp.monogenic_basis(m, k)[:2]:
                f = gp.psi_basis(parity, j, k, mk)
                h, g = gp.harmonic_eigenvalues(parity, j, k, m)
                assert h == gp.basis_index(parity, j, k)
                scale = f.max_abs()
                assert (gp.hamiltonian_apply(f) - f * h).max_abs() <= 1e-13 * scale
                assert (gp.gamma_apply(f) - f * g).max_abs() <= 1e-13 * scale


def test_operator_exponential():
    alpha, beta = 0.7, -1.1
    for parity in ("even", "odd"):
        for j, k in [(0, 0), (1, 2), (2, 1)]:
            f = gp.psi_basis(parity, j, k, gp.monogenic_m2(k)[1])
            h, g = gp.harmonic_eigenvalues(parity, j, k, 2)
            out = gp.operator_exponential(f, alpha, beta)
            assert out.allclose(f * np.exp(1j * (-alpha * h + beta * g)), atol=1e-13)
    mixed = gp.psi_basis("even", 0, 0, m=2) + gp.psi_basis("even", 1, 0, m=2)
    with pytest.raises(gp.NotEigenvectorError):
        gp.operator_exponential(mixed, alpha, beta)


# monogenics and the basis


def test_monogenic_m2():
    p0, q0 = gp.monogenic_m2(0)
    assert p0.allclose(CliffordPolynomial.constant(2)) and q0.allclose(CliffordPolynomial.constant(2, algebra(2).basis(1)))
    for k in range(6):
        for mk in gp.monogenic_m2(k):
            assert gp.dirac_apply(mk).is_zero(1e-12)
            assert mk.is_homogeneous(k)


def test_monogenic_project():
    mk = gp.monogenic_m2(2)[0]
    assert gp.monogenic_project(mk, 2) is mk
    h = CliffordPolynomial(4, {(1, 0, 0, 0): 1.0, (0, 1, 0, 0): algebra(4).basis(3)})
    out = gp.monogenic_project(h, 1)
    assert gp.dirac_apply(out).is_zero(1e-14)
    with pytest.raises(ValueError):
        gp.monogenic_project(CliffordPolynomial.norm_squared(3), 2)
    with pytest.raises(ValueError):
        gp.monogenic_project(h + CliffordPolynomial.constant(4), 1)


@pytest.mark.parametrize("m", [3, 4, 5])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_monogenic_project_idempotent(m, k):
    for mk in gp.monogenic_basis(m, k):
        assert gp.dirac_apply(mk).max_abs() <= 1e-13 * mk.max_abs()
        assert gp.monogenic_project(mk, k).allclose(mk)


def test_monogenic_basis_is_independent():
    basis = gp.monogenic_basis(4, 2)
    x = np.random.default_rng(2).normal(size=(30, 4))
    mat = np.stack([b.evaluate(x).ravel() for b in basis], axis=1)
    assert np.linalg.matrix_rank(mat) == len(basis)


def test_psi_examples():
    x = np.array([[0.3, -0.8], [1.1, 0.2]])
    r2 = np.sum(x * x, axis=1)
    g = np.exp(-r2 / 2)
    assert np.allclose(gp.psi_basis("even", 0, 0, m=2).evaluate(x)[:, 0], g)
    odd = gp.psi_basis("odd", 0, 0, m=2).evaluate(x)
    assert np.allclose(odd[:, 1], x[:, 0] * g) and np.allclose(odd[:, 2], x[:, 1] * g)
    assert np.allclose(gp.psi_basis("even", 1, 0, m=2).evaluate(x)[:, 0], (1 - r2) * g)


def test_psi_errors():
    with pytest.raises(gp.NotMonogenicError):
        gp.psi_basis("even", 0, 1, CliffordPolynomial.coordinate(2, 0))
    with pytest.raises(gp.NotMonogenicError):
        gp.psi_basis("even", 0, 2, gp.monogenic_m2(1)[0])
    with pytest.raises(ValueError):
        gp.psi_basis("sideways", 0, 0, m=2)
    with pytest.raises(ValueError):
        gp.psi_basis("even", 0, 1, m=2)


# serialisation


@settings(max_examples=30, deadline=None)
@given(polys)
def test_polynomial_json_round_trip(f):
    back = CliffordPolynomial.from_json(f.to_json())
    assert back == f
    g = GaussianPolynomial(f)
    data = json.loads(g.to_json())
    assert data["gaussian"] is True
    assert GaussianPolynomial.from_json(g.to_json()) == g


def test_polynomial_json_layout():
    f = CliffordPolynomial(2, {(1, 0): 2.0})
    assert f.to_dict() == {"m": 2, "terms": [{"exps": [1, 0], "coeff": {"m": 2, "coeffs": {"0": [2.0, 0.0]}}}]}
