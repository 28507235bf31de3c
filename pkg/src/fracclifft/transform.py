r"""The fractional Clifford-Fourier transform as an integral operator.

.. math::

    \mathcal F_{\alpha,\beta}[f](y) = \bigl(\pi(1 - e^{-2i\alpha})\bigr)^{-m/2}
        \int_{\mathbb R^m} K_{\alpha,\beta}(x, y)\, f(x)\, dx

The integral runs over the first kernel argument and is evaluated with a
tensor-product Gauss-Legendre rule on ``[-R, R]^m``.  Also provided: the
one-dimensional radial reduction for functions ``f0(|x|) M_k(x)`` and
``f0(|x|) x M_k(x)``, the Laguerre-Bessel integral behind the eigenvalues,
exact eigenvalues of the basis ``psi``, and the operators at the exceptional
angles ``alpha in {0, +-pi}`` where no kernel exists.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clifford import DimensionMismatchError, Multivector, algebra
from .gaussian_poly import CliffordPolynomial, GaussianPolynomial, harmonic_eigenvalues, monogenic_basis, psi_basis, vector_left
from .kernel import EXCEPTIONAL_TOL, ExceptionalParameterError, KernelParams, kernel
from .special import bessel_j, bessel_j_tilde_sequence, laguerre, laguerre_coefficients

__all__ = [
    "BasisExpansion",
    "QuadratureSpec",
    "TransformResult",
    "UnderResolvedWarning",
    "apply_transform",
    "chebyshev_interpolation_matrix",
    "eigenvalue",
    "eigenvalue_series",
    "exceptional_operator",
    "fractional_cft",
    "inversion_roundtrip",
    "laguerre_hankel_identity_check",
    "laguerre_hankel_rhs",
    "normalization_constant",
    "psi",
    "radial_basis_transform",
    "radial_transform",
    "resolve_threads",
    "run_manifest",
]

DEFAULT_NODES = {1: 400, 2: 160, 3: 64, 4: 48}
# kernel values held in memory per block of output points
_BLOCK_ELEMENTS = 1 << 19


class UnderResolvedWarning(UserWarning):
    """Quadrature result moved by more than the tolerance under refinement."""


def resolve_threads(threads=None):
    """Thread count: explicit value, else ``FRACCLIFFT_THREADS``, else 1."""
    if threads is None:
        threads = int(os.environ.get("FRACCLIFFT_THREADS", "1"))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return int(threads)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor Gauss-Legendre rule on ``[-box_radius, box_radius]^m``.

    ``nodes_per_axis=None`` selects a per-dimension default (160 for
    ``m = 2``, 48 for ``m = 4``).
    """

    box_radius: float = 8.0
    nodes_per_axis: int = None

    def __post_init__(self):
        if not self.box_radius > 0:
            raise ValueError("box_radius must be positive")
        if self.nodes_per_axis is not None and self.nodes_per_axis < 8:
            raise ValueError("nodes_per_axis must be >= 8")

    def nodes(self, m):
        return self.nodes_per_axis or DEFAULT_NODES.get(m, 16)

    def total_nodes(self, m):
        return self.nodes(m) ** m

    def refined(self, m, factor=1.5):
        return QuadratureSpec(self.box_radius, int(math.ceil(factor * self.nodes(m))))

    def rule(self, m):
        """Nodes ``(N, m)`` and weights ``(N,)``."""
        t, w = np.polynomial.legendre.leggauss(self.nodes(m))
        t = t * self.box_radius
        w = w * self.box_radius
        grids = np.meshgrid(*([t] * m), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        wts = w
        for _ in range(m - 1):
            wts = np.multiply.outer(wts, w)
        return pts, wts.ravel()


def normalization_constant(alpha, m):
    r"""``(pi (1 - exp(-2 i alpha)))^(-m/2)``, principal branch for odd ``m``."""
    if abs(math.sin(alpha)) < EXCEPTIONAL_TOL:
        raise ExceptionalParameterError(f"alpha={alpha} is exceptional")
    base = math.pi * (1 - np.exp(-2j * alpha))
    if m % 2 == 0:
        return complex(base ** -(m // 2))
    return complex(base ** (-m / 2))


@dataclass(frozen=True)
class TransformResult:
    """Transform values with quadrature metadata.

    ``values`` has shape ``(P, 2**m)`` (one input function) or
    ``(F, P, 2**m)`` (a list), with the ``P`` axis dropped for a single
    output point.
    """

    m: int
    values: np.ndarray
    total_nodes: int
    under_resolved: bool = False
    resolution_change: float = float("nan")
    meta: dict = field(default_factory=dict)

    def multivector(self):
        if self.values.ndim != 1:
            raise ValueError("multivector() needs a single function and a single output point")
        return Multivector(self.m, self.values)


def _as_callable(f):
    if isinstance(f, (GaussianPolynomial, CliffordPolynomial, BasisExpansion)):
        return f.evaluate
    if callable(f):
        return f
    raise TypeError("target function must be a GaussianPolynomial or a callable returning coefficient arrays")


def _integrate(fvals, p, ys, pts, wts, route, threads):
    alg = algebra(p.m)
    weighted = [fv * wts[:, None] for fv in fvals]
    block = max(1, _BLOCK_ELEMENTS // len(pts))
    chunks = [ys[i:i + block] for i in range(0, len(ys), block)]

    def work(yb):
        kc = kernel(pts[None, :, :], yb[:, None, :], p, route).coeffs()
        return np.stack([alg.product(kc, fv).sum(axis=1) for fv in weighted])

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return normalization_constant(p.alpha, p.m) * np.concatenate(parts, axis=1)


def fractional_cft(f, p, y, q=None, route="auto", check_resolution=True, resolution_tol=1e-6, threads=None):
    """Apply the fractional transform by quadrature.

    Parameters
    ----------
    f : GaussianPolynomial, callable or list of these
        Callables map points ``(N, m)`` to coefficient arrays ``(N, 2**m)``.
    p : KernelParams
    y : array_like
        Output point ``(m,)`` or points ``(P, m)``.
    q : QuadratureSpec, optional
    route : {'auto', 'closed', 'series'}
        Kernel route; ``auto`` uses the closed form for even ``m``.
    check_resolution : bool
        Repeat with 1.5 times the nodes per axis; the relative change is
        reported and sets ``under_resolved`` (with a warning) when it
        exceeds ``resolution_tol``.
    threads : int, optional
        Worker threads over blocks of output points.  Results do not depend
        on the thread count.
    """
    q = q or QuadratureSpec()
    ys = np.asarray(y, dtype=float)
    single_point = ys.ndim == 1
    ys = np.atleast_2d(ys)
    if ys.shape[-1] != p.m:
        raise DimensionMismatchError(f"output points must have {p.m} coordinates")
    single_func = not isinstance(f, (list, tuple))
    funcs = [_as_callable(g) for g in ([f] if single_func else f)]
    threads = resolve_threads(threads)

    def run(spec):
        pts, wts = spec.rule(p.m)
        fvals = [np.asarray(g(pts), dtype=complex) for g in funcs]
        return _integrate(fvals, p, ys, pts, wts, route, threads)

    values = run(q)
    change, flag = float("nan"), False
    if check_resolution:
        fine = run(q.refined(p.m))
        scale = max(float(np.max(np.abs(fine))), 1e-300)
        change = float(np.max(np.abs(fine - values))) / scale
        flag = change > resolution_tol
        if flag:
            warnings.warn(f"quadrature under-resolved: relative change {change:.2e} under refinement", UnderResolvedWarning, stacklevel=2)
    if single_func:
        values = values[0]
    if single_point:
        values = values[..., 0, :]
    return TransformResult(p.m, values, q.total_nodes(p.m), flag, change)


# basis functions and eigenvalues


def psi(parity, j, k, ell, m):
    """Basis function ``psi`` built on the ``ell``-th monogenic of :func:`monogenic_basis`."""
    mks = monogenic_basis(m, k)
    if not 0 <= ell < len(mks):
        raise ValueError(f"ell={ell} out of range: {len(mks)} monogenics of degree {k} constructed")
    return psi_basis(parity, j, k, mks[ell])


def eigenvalue(parity, j, k, alpha, beta, m):
    """Eigenvalue ``exp(i(-alpha H + beta Gamma))`` on ``psi``; valid for every ``alpha``."""
    h, g = harmonic_eigenvalues(parity, j, k, m)
    return complex(np.exp(-1j * alpha * h) * np.exp(1j * beta * g))


def _radial_coefficient(parity, k, m, alpha, beta):
    """Coefficient combination of the kernel series entering the radial formulas.

    ``lam * alpha_k`` is formed with ``lam Gamma(lam) = Gamma(lam + 1)`` so
    that dimension 2 needs no limit.
    """
    lam = (m - 2) / 2
    g1 = math.gamma(lam + 1)
    n = k if parity == "even" else k + 1

    def lam_alpha(n):
        ep, em = np.exp(1j * beta * (n + 2 * lam)), np.exp(-1j * beta * n)
        return 2 ** (lam - 1) * (-1j) ** n * (-lam * g1 * (ep - em) + g1 * (n + lam) * (ep + em))

    def beta_n(n):
        ep, em = np.exp(1j * beta * (n + 2 * lam)), np.exp(-1j * beta * n)
        return 2 ** lam * g1 / math.sin(alpha) * (-1j) ** n * (ep - em)

    if n == 0:
        # alpha_0 itself; lam alpha_0 / lam is its own limit
        return complex(2 ** (lam - 1) * g1 * 2)
    if parity == "even":
        return complex(lam_alpha(n) / (lam + n) - math.sin(alpha) * n / (2 * (n + lam)) * beta_n(n))
    return complex(lam_alpha(n) / (lam + n) + math.sin(alpha) * (n + 2 * lam) / (2 * (n + lam)) * beta_n(n))


def eigenvalue_series(parity, j, k, alpha, beta, m):
    """Eigenvalue obtained from the kernel's series coefficients (second route)."""
    lam = (m - 2) / 2
    coef = _radial_coefficient(parity, k, m, alpha, beta)
    n = 2 * j + k + (1 if parity == "odd" else 0)
    ipow = 1j ** (k if parity == "even" else k + 1)
    return complex(2 ** (-lam) / math.gamma(lam + 1) * coef * ipow * np.exp(-1j * alpha * n))


def _radial_assemble(parity, k, mk, p, y, integral):
    m = p.m
    sa = math.sin(p.alpha)
    c_m = 2 / (math.gamma(m / 2) * (1 - np.exp(-2j * p.alpha)) ** (m / 2))
    coef = _radial_coefficient(parity, k, m, p.alpha, p.beta)
    pre = c_m * coef * np.exp(0.5j / math.tan(p.alpha) * float(np.dot(y, y)))
    if parity == "even":
        ang = mk.evaluate(y) * sa ** (-k)
    else:
        ang = vector_left(mk).evaluate(y) * sa ** (-(k + 1))
    return Multivector(m, pre * integral * ang)


def _check_radial(parity, mk, p):
    if p.m % 2:
        raise ValueError("the radial reduction is implemented for even m")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if not isinstance(mk, CliffordPolynomial) or mk.m != p.m:
        raise DimensionMismatchError("mk must be a CliffordPolynomial of the kernel dimension")
    if not mk.is_homogeneous():
        raise ValueError("mk must be homogeneous")
    return max(mk.degree(), 0)


def radial_transform(f0, mk, parity, p, y_norm, eta, radius=8.0, nodes=200):
    r"""Transform of ``f0(|x|) M_k(x)`` (even) or ``f0(|x|) x M_k(x)`` (odd) at ``y = y_norm eta``.

    The angular integration is done analytically; the remaining radial
    integral is evaluated by Gauss-Legendre on ``[0, radius]``.  Powers of
    ``|y|`` are folded into ``M_k(y)`` so ``y = 0`` is regular.
    """
    k = _check_radial(parity, mk, p)
    eta = np.asarray(eta, dtype=float)
    y = float(y_norm) * eta / np.linalg.norm(eta)
    lam = (p.m - 2) / 2
    t, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * radius * (t + 1)
    w = 0.5 * radius * w
    nu = k + lam if parity == "even" else k + 1 + lam
    power = p.m + 2 * k - 1 if parity == "even" else p.m + 2 * k + 1
    zt = r * float(y_norm) / math.sin(p.alpha)
    jt = bessel_j_tilde_sequence(nu, 0, zt)[:, 0]
    integrand = r ** power * np.asarray(f0(r)) * jt * np.exp(0.5j / math.tan(p.alpha) * r ** 2)
    return _radial_assemble(parity, k, mk, p, y, np.sum(w * integrand))


def laguerre_hankel_rhs(n, nu, beta_param, y, reduced=False):
    r"""Closed form of :math:`\int_0^\infty x^{\nu+1} e^{-\beta x^2} L_n^\nu(x^2) J_\nu(xy)\,dx`.

    The factor ``(beta - 1)^n L_n^nu(u / (1 - beta))`` (``u = y^2/(4 beta)``)
    is expanded as a polynomial in ``u`` so ``beta = 1`` is regular.  With
    ``reduced=True`` the factor ``y^nu`` is omitted.
    """
    b = complex(beta_param)
    if b.real <= 0:
        raise ValueError("the integral diverges unless Re(beta) > 0")
    y = float(y)
    u = y * y / (4 * b)
    poly = sum((-1) ** i * c * (b - 1) ** (n - i) * u ** i for i, c in enumerate(laguerre_coefficients(n, nu)))
    out = 2.0 ** (-nu - 1) * b ** (-nu - n - 1) * np.exp(-u) * poly
    return complex(out if reduced else out * y ** nu)


def laguerre_hankel_identity_check(n, nu, beta_param, y, nodes=300):
    """Absolute residual between the quadrature and closed form of the Laguerre-Bessel integral."""
    b = complex(beta_param)
    if b.real <= 0:
        raise ValueError("the integral diverges unless Re(beta) > 0")
    if nu < 0:
        raise ValueError("nu must be non-negative")
    # cut where the Gaussian factor drops below 1e-18 of its peak, with room for the polynomial
    radius = math.sqrt((42.0 + 4 * n + 2 * nu) / b.real) + 1.0
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * radius * (t + 1)
    w = 0.5 * radius * w
    integrand = x ** (nu + 1) * np.exp(-b * x * x) * laguerre(n, nu, x * x) * bessel_j(nu, x * float(y))
    lhs = complex(np.sum(w * integrand))
    return abs(lhs - laguerre_hankel_rhs(n, nu, b, y))


def radial_basis_transform(parity, j, k, mk, p, y):
    """Transform of ``psi`` with the radial integral done by the Laguerre-Bessel identity."""
    k_mk = _check_radial(parity, mk, p)
    if k_mk != k:
        raise ValueError("mk degree does not match k")
    y = np.asarray(y, dtype=float)
    lam = (p.m - 2) / 2
    nu = k + lam if parity == "even" else k + 1 + lam
    b = 0.5 - 0.5j / math.tan(p.alpha)
    qy = float(np.linalg.norm(y)) / abs(math.sin(p.alpha))
    # J~ is even, so the sign of sin(alpha) drops out of the Bessel factor
    integral = laguerre_hankel_rhs(j, nu, b, qy, reduced=True)
    return _radial_assemble(parity, k, mk, p, y, integral)


# exceptional angles


@dataclass(frozen=True)
class BasisExpansion:
    """Finite combination ``sum c psi`` with terms ``(coeff, parity, j, k, ell)``."""

    m: int
    terms: tuple

    def functions(self):
        return [(complex(c), psi(par, j, k, ell, self.m), par, j, k) for c, par, j, k, ell in self.terms]

    def gaussian(self):
        out = None
        for c, f, *_ in self.functions():
            out = f * c if out is None else out + f * c
        return out

    def evaluate(self, x):
        return self.gaussian().evaluate(x)


def exceptional_operator(f, alpha, beta, y):
    """Operator at ``alpha in {0, +-pi}`` acting through the basis eigenvalues.

    ``alpha = 0`` gives ``exp(i beta Gamma)``; ``alpha = +-pi`` composes it
    with the parity map ``f(y) -> f(-y)``.
    """
    if not isinstance(f, BasisExpansion):
        raise TypeError("exceptional angles need the function as a finite BasisExpansion")
    if min(abs(alpha), abs(abs(alpha) - math.pi)) > 1e-12:
        raise ValueError(f"alpha={alpha} is not exceptional")
    y = np.asarray(y, dtype=float)
    total = np.zeros(y.shape[:-1] + (algebra(f.m).dim,), dtype=complex)
    for c, fn, par, j, k in f.functions():
        total = total + c * eigenvalue(par, j, k, alpha, beta, f.m) * fn.evaluate(y)
    return total


def apply_transform(f, alpha, beta, m, y, q=None, **kwargs):
    """Dispatch to :func:`fractional_cft` or, at exceptional ``alpha``, :func:`exceptional_operator`.

    Returns coefficient arrays; quadrature metadata is dropped.
    """
    if abs(math.sin(alpha)) < EXCEPTIONAL_TOL:
        return exceptional_operator(f, alpha, beta, y)
    return fractional_cft(f, KernelParams(alpha, beta, m), y, q, **kwargs).values


# inversion by double quadrature


def chebyshev_interpolation_matrix(n, radius, x):
    """Barycentric interpolation from ``n`` Chebyshev extreme points on ``[-radius, radius]`` to ``x``."""
    i = np.arange(n)
    nodes = radius * np.cos(np.pi * i / (n - 1))
    wts = (-1.0) ** i
    wts[0] *= 0.5
    wts[-1] *= 0.5
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - nodes[None, :]
    exact = diff == 0
    diff[exact] = 1.0
    mat = wts / diff
    mat /= mat.sum(axis=1, keepdims=True)
    rows = np.any(exact, axis=1)
    mat[rows] = exact[rows].astype(float)
    return nodes, mat


def inversion_roundtrip(funcs, p, y_out, q=None, grid_nodes=40, grid_radius=6.5, threads=None):
    """Apply ``F_{-alpha,-beta}`` after ``F_{alpha,beta}`` by two quadratures.

    The intermediate transform is sampled on a Chebyshev tensor grid on
    ``[-grid_radius, grid_radius]^m`` (``None`` means the quadrature box) and
    interpolated barycentrically onto the second rule's nodes; nodes outside
    the grid see zero, so a smaller grid suits rapidly decaying inputs.
    Returns values ``(F, P, 2**m)`` at ``y_out``.
    """
    q = q or QuadratureSpec()
    m = p.m
    funcs = [_as_callable(g) for g in funcs]
    threads = resolve_threads(threads)
    radius = q.box_radius if grid_radius is None else min(grid_radius, q.box_radius)
    cheb, _ = chebyshev_interpolation_matrix(grid_nodes, radius, [0.0])
    grids = np.meshgrid(*([cheb] * m), indexing="ij")
    grid_pts = np.stack([g.ravel() for g in grids], axis=-1)
    pts, wts = q.rule(m)
    first = _integrate([np.asarray(g(pts), dtype=complex) for g in funcs], p, grid_pts, pts, wts, "auto", threads)
    gl = np.polynomial.legendre.leggauss(q.nodes(m))[0] * q.box_radius
    _, mat = chebyshev_interpolation_matrix(grid_nodes, radius, gl)
    mat[np.abs(gl) > radius] = 0.0
    dim = algebra(m).dim
    second_in = []
    for vals in first:
        arr = vals.reshape((grid_nodes,) * m + (dim,))
        for axis in range(m):
            arr = np.moveaxis(np.tensordot(mat, arr, axes=([1], [axis])), 0, axis)
        second_in.append(arr.reshape(-1, dim))
    inv = KernelParams(-p.alpha, -p.beta, m)
    return _integrate(second_in, inv, np.atleast_2d(np.asarray(y_out, dtype=float)), pts, wts, "auto", threads)


# batch manifests


def _function_from_spec(spec, m):
    kind = spec.get("kind", "psi")
    if kind == "psi":
        return psi(spec["parity"], int(spec["j"]), int(spec["k"]), int(spec.get("ell", 0)), m), spec
    if kind == "gaussian_poly":
        return GaussianPolynomial.from_dict(spec["poly"]), None
    raise ValueError(f"unknown function kind {kind!r}")


def run_manifest(manifest, threads=None):
    """Evaluate a batch manifest.

    The manifest is a mapping with ``params`` (``alpha``, ``beta``, ``m``),
    optional ``quadrature`` (``box_radius``, ``nodes_per_axis``),
    ``function`` (``{"kind": "psi", "parity", "j", "k", "ell"}`` or
    ``{"kind": "gaussian_poly", "poly": ...}``) and ``output_points``.

    Returns ``(points, values, ratio, meta)``; ``ratio`` is the observed
    eigenvalue per point for basis inputs and ``None`` otherwise.
    """
    prm = manifest["params"]
    alpha, beta, m = float(prm["alpha"]), float(prm["beta"]), int(prm["m"])
    q = QuadratureSpec(**manifest.get("quadrature", {}))
    f, basis_spec = _function_from_spec(manifest["function"], m)
    ys = np.atleast_2d(np.asarray(manifest["output_points"], dtype=float))
    meta = {"total_nodes": q.total_nodes(m), "under_resolved": False, "route": "quadrature"}
    if abs(math.sin(alpha)) < EXCEPTIONAL_TOL:
        if basis_spec is None:
            raise ValueError("exceptional angles need a basis function input")
        expansion = BasisExpansion(m, ((1.0, basis_spec["parity"], int(basis_spec["j"]), int(basis_spec["k"]), int(basis_spec.get("ell", 0))),))
        values = exceptional_operator(expansion, alpha, beta, ys)
        meta["route"] = "exceptional"
    else:
        res = fractional_cft(f, KernelParams(alpha, beta, m), ys, q, threads=threads)
        values = res.values
        meta.update(under_resolved=res.under_resolved, resolution_change=res.resolution_change)
    ratio = None
    if basis_spec is not None:
        exact = f.evaluate(ys)
        idx = np.argmax(np.abs(exact), axis=-1)
        pick = np.arange(len(ys))
        ratio = values[pick, idx] / exact[pick, idx]
        meta["eigenvalue"] = eigenvalue(basis_spec["parity"], int(basis_spec["j"]), int(basis_spec["k"]), alpha, beta, m)
    return ys, values, ratio, meta
