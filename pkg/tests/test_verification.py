import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracclifft.kernel import KernelParams
from fracclifft.verification import (
    ResidualReport,
    SuiteConfig,
    bound_ratio,
    check_beta_zero,
    check_bounds,
    check_cft_reference,
    check_laguerre_hankel,
    check_operator_calculus,
    check_pde_first_order,
    check_pde_hatted,
    check_pde_second_order,
    check_recursions,
    check_route_agreement,
    random_params,
    random_polynomial,
    run_suite,
    sample_points,
)


def _samples(m, n=6, seed=0):
    return sample_points(np.random.default_rng([seed, m]), m, n)


# reports


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1e3, allow_nan=False), st.floats(0, 1e3, allow_nan=False))
def test_report_pass_iff_within_tolerance(res, tol):
    rep = ResidualReport("x", {}, res, tol)
    assert rep.passed == (res <= tol)


def test_report_nan_fails_and_json():
    assert not ResidualReport("x", {}, float("nan"), 1.0).passed
    rep = ResidualReport("name", {"m": np.int64(2)}, np.float64(1e-9), 1e-6, {"arr": np.array([1.0, 2.0]), "c": 1 + 2j})
    data = json.loads(rep.to_json())
    assert data == {"name": "name", "params": {"m": 2}, "max_residual": 1e-9, "tolerance": 1e-6,
                    "metadata": {"arr": [1.0, 2.0], "c": [1.0, 2.0]}, "passed": True}


# samplers


def test_samplers():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = random_params(rng, 4, margin=0.1)
        assert 0.1 <= abs(p.alpha) <= math.pi - 0.1
    x, y = sample_points(rng, 3, 100)
    nx, ny = np.linalg.norm(x, axis=1), np.linalg.norm(y, axis=1)
    assert np.all((nx >= 0.3) & (nx <= 3.0) & (ny >= 0.3) & (ny <= 3.0))
    cos = np.sum(x * y, axis=1) / (nx * ny)
    assert np.all(np.abs(cos) <= math.cos(0.05) + 1e-12)
    assert random_polynomial(rng, 3).m == 3


# kernel checks


def test_route_agreement_and_canary():
    assert check_route_agreement(4, n_pairs=40, n_params=4, seed=1).passed
    bad = check_route_agreement(4, n_pairs=40, n_params=4, seed=1, perturb=1e-6)
    assert not bad.passed
    assert bad.max_residual >= 1e-7


def test_beta_zero_and_reference_checks():
    assert check_beta_zero(2, n=20, seed=2).passed
    rep = check_cft_reference(6, n=30, seed=2)
    assert rep.passed
    assert rep.metadata["constant"] == pytest.approx([1.0, 0.0], abs=1e-12)


def test_recursions_and_laguerre_hankel():
    assert check_recursions(seed=3).passed
    assert check_laguerre_hankel().passed


def test_operator_calculus_check():
    rep = check_operator_calculus(seed=4, dims=(2,), max_index=2, n_random=4)
    assert rep.passed and rep.max_residual <= 1e-13


# PDE checks


def test_first_order_beta_zero_m2():
    rep = check_pde_first_order(KernelParams(1.1, 0.0, 2), _samples(2))
    assert rep.passed


def test_first_order_quarter_period_m2():
    rep = check_pde_first_order(KernelParams(math.pi / 2, math.pi / 2, 2), _samples(2))
    assert rep.passed
    assert 3.0 <= rep.metadata["halving_ratio"] <= 5.0


def test_first_order_m4_random():
    p = random_params(np.random.default_rng(5), 4, margin=0.3)
    rep = check_pde_first_order(p, _samples(4), tolerance=1e-5)
    assert rep.passed
    assert math.log2(rep.metadata["halving_ratio"]) == pytest.approx(2.0, abs=0.2)


def test_second_order():
    rep = check_pde_second_order(KernelParams(math.pi / 3, math.pi / 3, 2), _samples(2))
    assert rep.passed
    assert rep.metadata["hamiltonian"] <= 1e-4
    rep0 = check_pde_second_order(KernelParams(0.8, 0.0, 2), _samples(2))
    assert max(rep0.metadata["dirac_plus"], rep0.metadata["dirac_minus"]) <= 1e-5


def test_hatted_system():
    rep = check_pde_hatted(KernelParams(1.2, -0.6, 2), _samples(2))
    assert rep.passed and rep.metadata["consistency"] <= 1e-8
    assert check_pde_hatted(KernelParams(1.2, 0.0, 2), _samples(2), tolerance=1e-8, order=4).passed
    p = random_params(np.random.default_rng(6), 4, margin=0.3)
    assert check_pde_hatted(p, _samples(4), tolerance=1e-5).passed


def test_pde_check_detects_wrong_kernel():
    # beta of the partner kernel flipped: the identity must fail clearly
    p = KernelParams(1.0, 0.9, 2)
    x, y = _samples(2)
    good = check_pde_first_order(p, (x, y)).max_residual
    from fracclifft.verification import _first_order_residuals
    a, b, c, d = _first_order_residuals(p, x, y, 1e-4)
    wrong = np.max(np.abs(a - b * np.exp(0.3j)))
    assert wrong > 1e3 * good


# bounds


def test_bound_ratio():
    peak_ratio, peak = bound_ratio(KernelParams(1.2, 0.9, 2), n_grid=20)
    assert peak <= 1 + 1e-12
    assert peak_ratio == peak
    rep = check_bounds(KernelParams(1.2, 0.9, 4), n_coarse=20, n_fine=40)
    assert rep.passed and np.isfinite(rep.metadata["fine"])


# suite


def test_suite_filter_and_determinism():
    a = run_suite(SuiteConfig(seed=7, only="pde_first"))
    b = run_suite(SuiteConfig(seed=7, only="pde_first"))
    assert [r.name for r in a] == ["pde_first_order_m2", "pde_first_order_m4"]
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert all(r.passed for r in a)


def test_suite_reports_are_finite():
    reports = run_suite(SuiteConfig(seed=1, only="b"))
    assert {r.name for r in reports} == {"beta_zero_m2", "beta_zero_m4", "bounds_m2", "bounds_m4"}
    assert all(np.isfinite(r.max_residual) for r in reports)
