r"""Kernel of the fractional Clifford-Fourier transform.

The kernel

.. math::

    K_{\alpha,\beta}(x, y) = e^{\frac{i}{2}\cot\alpha(|x|^2+|y|^2)}\,
        e^{i\beta\Gamma_y} e^{-i\langle x, y\rangle/\sin\alpha}

takes values in grades 0 and 2 only.  Three independent evaluation routes
are provided:

* :func:`kernel_series` -- Gegenbauer/Bessel series, any dimension;
* :func:`kernel_closed_m2` -- trigonometric closed form for ``m = 2``;
* :func:`kernel_closed_even` -- finite Bessel sums for even ``m >= 4``.

All routes broadcast over leading axes of ``x`` and ``y`` (last axis is the
coordinate index).
"""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .clifford import DimensionMismatchError, Multivector, algebra
from .special import (
    bessel_j_sequence,
    bessel_j_tilde_sequence,
    gegenbauer_all,
    gegenbauer_lambda0_scaled,
)

__all__ = [
    "ExceptionalParameterError",
    "GeometricInvariants",
    "KernelParams",
    "KernelValue",
    "RecursionReport",
    "UnvalidatedRegimeWarning",
    "default_truncation",
    "invariants",
    "kernel",
    "kernel_cft_reference",
    "kernel_closed",
    "kernel_closed_even",
    "kernel_closed_m2",
    "kernel_fractional_fourier",
    "kernel_series",
    "gamma_exponential_action",
    "recursion_check",
    "series_parts",
]

EXCEPTIONAL_TOL = 1e-12


class ExceptionalParameterError(ValueError):
    """``alpha`` in {0, +-pi}: no integral kernel exists."""


class UnvalidatedRegimeWarning(UserWarning):
    """Evaluation outside the regime covered by the known bounds (odd m)."""


def _check_angle(name, value):
    if not np.isfinite(value) or abs(value) > math.pi + 1e-12:
        raise ValueError(f"{name} must lie in [-pi, pi], got {value}")


@dataclass(frozen=True)
class KernelParams:
    """Numerical parameters of the transform.

    ``truncation`` is used by the series route only; ``None`` selects
    :func:`default_truncation` per call.
    """

    alpha: float
    beta: float
    m: int
    truncation: int = None
    beta_small_threshold: float = 1e-6

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or not 1 <= self.m <= 8:
            raise ValueError(f"dimension must be an integer in 1..8, got {self.m!r}")
        _check_angle("alpha", self.alpha)
        _check_angle("beta", self.beta)
        if abs(math.sin(self.alpha)) < EXCEPTIONAL_TOL:
            raise ExceptionalParameterError(
                f"alpha={self.alpha} is exceptional (sin alpha = 0); use transform.exceptional_operator"
            )
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be >= 1")

    @property
    def lam(self):
        return (self.m - 2) / 2

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class GeometricInvariants:
    """Scalar invariants of a point pair (arrays broadcast over samples)."""

    s: np.ndarray
    t: np.ndarray
    w: np.ndarray
    z_tilde: np.ndarray
    s_star: np.ndarray
    t_star: np.ndarray
    norm_x: np.ndarray
    norm_y: np.ndarray
    wedge: np.ndarray  # components of x ^ y on e_j e_k, j < k


@dataclass(frozen=True)
class KernelValue:
    """Kernel value(s): a scalar part plus a bivector part.

    ``bivector[..., n]`` is the coefficient of ``e_j e_k`` for the ``n``-th
    pair ``j < k`` in lexicographic order.  ``tail`` is the truncation-tail
    estimate of the series route (``None`` for closed forms).
    """

    m: int
    scalar: np.ndarray
    bivector: np.ndarray
    tail: np.ndarray = field(default=None, compare=False)

    def coeffs(self):
        """Dense coefficient array of shape ``(..., 2**m)``."""
        alg = algebra(self.m)
        out = alg.bivector(self.bivector) if self.bivector.shape[-1] else np.zeros(np.shape(self.scalar) + (alg.dim,), complex)
        out[..., 0] = self.scalar
        return out

    @property
    def scalar_part(self):
        """Scalar part (``A + B`` times the phase)."""
        return self.scalar

    @property
    def bivector_part(self):
        """Grade-2 part as a :class:`Multivector` (single values only)."""
        return Multivector(self.m, algebra(self.m).grade(self.coeffs(), 2)) if np.ndim(self.scalar) == 0 else algebra(self.m).bivector(self.bivector)

    def multivector(self):
        if np.ndim(self.scalar) != 0:
            raise ValueError("multivector() needs a single kernel value; use coeffs() for arrays")
        return Multivector(self.m, self.coeffs())

    def norm(self):
        return np.sqrt(np.abs(self.scalar) ** 2 + np.sum(np.abs(self.bivector) ** 2, axis=-1))

    def __sub__(self, other):
        return KernelValue(self.m, self.scalar - other.scalar, self.bivector - other.bivector)

    def __add__(self, other):
        return KernelValue(self.m, self.scalar + other.scalar, self.bivector + other.bivector)

    def scale(self, factor):
        factor = np.asarray(factor)
        return KernelValue(self.m, self.scalar * factor, self.bivector * factor[..., None])


def _points(x, y, m):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != m or y.shape[-1] != m:
        raise DimensionMismatchError(f"points must have {m} coordinates, got {x.shape[-1]} and {y.shape[-1]}")
    return x, y


def invariants(x, y, p):
    """Compute ``s, t, w, z~, s*, t*`` for points ``x``, ``y``.

    ``t`` is the norm of the bivector ``x ^ y`` computed from its
    components, so nearly parallel pairs keep full relative accuracy.
    """
    x, y = _points(x, y, p.m)
    x, y = np.broadcast_arrays(x, y)
    alg = algebra(p.m)
    s = np.sum(x * y, axis=-1)
    nx = np.sqrt(np.sum(x * x, axis=-1))
    ny = np.sqrt(np.sum(y * y, axis=-1))
    if alg.pairs:
        wedge = np.stack([x[..., j] * y[..., k] - x[..., k] * y[..., j] for j, k in alg.pairs], axis=-1)
    else:
        wedge = np.zeros(s.shape + (0,))
    t = np.sqrt(np.sum(wedge * wedge, axis=-1))
    prod = nx * ny
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(prod > 0, s / np.where(prod > 0, prod, 1.0), 0.0)
    w = np.clip(w, -1.0, 1.0)
    sa = math.sin(p.alpha)
    ratio = math.sin(p.beta) / sa
    return GeometricInvariants(
        s=s, t=t, w=w, z_tilde=prod / sa, s_star=ratio * s, t_star=ratio * t, norm_x=nx, norm_y=ny, wedge=wedge
    )


def gaussian_phase(inv, alpha):
    return np.exp(0.5j / math.tan(alpha) * (inv.norm_x ** 2 + inv.norm_y ** 2))


def default_truncation(z_tilde):
    """Series truncation ``max(40, ceil(e |z~|) + 20)``."""
    zmax = float(np.max(np.abs(z_tilde))) if np.size(z_tilde) else 0.0
    return max(40, int(math.ceil(math.e * zmax)) + 20)


def _bessel_powers(lam, kmax, z):
    """``z^k J~_{k+lam}(z)`` and ``z^(k-1) J~_{k+lam}(z)`` for k = 0..kmax, z signed."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    k = np.arange(kmax + 1)
    z0 = np.empty(z.shape + (kmax + 1,))
    z1 = np.zeros(z.shape + (kmax + 1,))
    small = az <= 2.0
    if np.any(small):
        a = az[small][:, None]
        tl = bessel_j_tilde_sequence(lam, kmax, az[small])
        z0[small] = a ** k * tl
        with np.errstate(divide="ignore", invalid="ignore"):
            z1[small, 1:] = a ** (k[1:] - 1) * tl[:, 1:]
    large = ~small
    if np.any(large):
        a = az[large]
        seq = bessel_j_sequence(lam, kmax, a)
        z0[large] = seq * a[:, None] ** (-lam)
        z1[large] = z0[large] / a[:, None]
    sgn = np.where(z < 0, -1.0, 1.0)[..., None]
    z0 = z0 * sgn ** k
    z1[..., 1:] = z1[..., 1:] * sgn ** (k[1:] - 1)
    return z0, z1


def series_parts(lam, w, z_tilde, alpha, beta, truncation=None, with_tail=False):
    r"""Series coefficients :math:`A_\lambda, B_\lambda, C_\lambda` at ``(w, z~)``.

    ``lam`` may be 0 (dimension 2), in which case the Gegenbauer weights are
    replaced by their ``lam -> 0`` limits.  The returned ``C`` already
    contains the ``1/sin(alpha)`` factor.
    """
    w = np.asarray(w, dtype=float)
    z_tilde = np.asarray(z_tilde, dtype=float)
    w, z_tilde = np.broadcast_arrays(w, z_tilde)
    kmax = truncation if truncation is not None else default_truncation(z_tilde)
    k = np.arange(kmax + 1)
    z0, z1 = _bessel_powers(lam, kmax, z_tilde)
    e_plus = np.exp(1j * beta * (k + 2 * lam))
    e_minus = np.exp(-1j * beta * k)
    ipow = (-1j) ** k
    if lam == 0:
        theta = np.arccos(w)
        b_w = np.empty(w.shape + (kmax + 1,))
        b_w[..., 0] = 0.5
        for n in range(1, kmax + 1):
            b_w[..., n] = 0.5 * n * gegenbauer_lambda0_scaled(n, theta)
        a_w = np.zeros_like(b_w)
        c_g = gegenbauer_all(max(kmax - 1, 0), 1.0, w)
        c_pref = 1.0
    else:
        g = gegenbauer_all(kmax, lam, w)
        b_w = 2 ** (lam - 1) * math.gamma(lam) * (k + lam) * g
        a_w = -(2 ** (lam - 1)) * math.gamma(lam + 1) * g
        c_g = gegenbauer_all(max(kmax - 1, 0), lam + 1, w)
        c_pref = 2 ** lam * math.gamma(lam + 1)
    c_w = np.zeros(w.shape + (kmax + 1,))
    c_w[..., 1:] = c_pref * c_g[..., :kmax] / math.sin(alpha)
    a_terms = ipow * (e_plus - e_minus) * a_w * z0
    b_terms = ipow * (e_plus + e_minus) * b_w * z0
    c_terms = ipow * (e_plus - e_minus) * c_w * z1
    parts = (a_terms.sum(axis=-1), b_terms.sum(axis=-1), c_terms.sum(axis=-1))
    if not with_tail:
        return parts
    last = slice(max(kmax - 2, 0), kmax + 1)
    tail = np.max(np.abs(a_terms[..., last] + b_terms[..., last]) + np.abs(c_terms[..., last]), axis=-1)
    return parts + (tail,)


def kernel_series(x, y, p, truncation=None):
    """Kernel by the Gegenbauer/Bessel series, truncated at ``k = K``.

    ``K`` is ``truncation``, else ``p.truncation``, else
    :func:`default_truncation`.  The returned value carries a tail estimate
    (largest of the last three term magnitudes, before the Gaussian phase).
    Odd ``m`` evaluates but emits :class:`UnvalidatedRegimeWarning`.
    """
    if p.m % 2:
        warnings.warn(f"series kernel in odd dimension m={p.m} is outside the validated regime", UnvalidatedRegimeWarning, stacklevel=2)
    inv = invariants(x, y, p)
    trunc = truncation if truncation is not None else p.truncation
    a, b, c, tail = series_parts(p.lam, inv.w, inv.z_tilde, p.alpha, p.beta, trunc, with_tail=True)
    phase = gaussian_phase(inv, p.alpha)
    return KernelValue(p.m, (a + b) * phase, inv.wedge * (c * phase)[..., None], tail=tail)


def _plane_wave(inv, p):
    phase = gaussian_phase(inv, p.alpha)
    scalar = np.exp(-1j * inv.s / math.sin(p.alpha)) * phase
    return KernelValue(p.m, scalar, np.zeros(inv.wedge.shape, dtype=complex))


def kernel_closed_m2(x, y, p):
    """Closed-form kernel in dimension 2.

    ``sin(t r) / t`` (``r = sin beta / sin alpha``) takes its limit ``r`` at
    ``t = 0``.
    """
    if p.m != 2:
        raise ValueError("kernel_closed_m2 requires m = 2")
    inv = invariants(x, y, p)
    if abs(p.beta) < p.beta_small_threshold:
        return _plane_wave(inv, p)
    sa = math.sin(p.alpha)
    r = math.sin(p.beta) / sa
    common = np.exp(-1j * inv.s * math.cos(p.beta) / sa) * gaussian_phase(inv, p.alpha)
    scalar = np.cos(inv.t * r) * common
    c = r * np.sinc(inv.t * r / math.pi) * common
    return KernelValue(2, scalar, inv.wedge * c[..., None])


def _multinomial(k, p, j):
    return math.factorial(k) // (math.factorial(k - p - j) * math.factorial(j) * math.factorial(p - j))


def kernel_closed_even(x, y, p):
    """Closed-form kernel for even ``m >= 4`` as finite Bessel sums.

    The resummed sums are evaluated with every ``tan(beta)`` and
    ``cot(beta)`` expanded into powers of ``sin(beta)`` and ``cos(beta)``,
    and with ``(s*)^(p-j)`` written as ``s^(p-j) (sin b / sin a)^(p-j)``,
    so the expression is regular at ``beta = 0, +-pi/2`` and at ``s = 0``.
    """
    if p.m % 2 or p.m < 4:
        raise ValueError("closed form requires even m >= 4" if p.m % 2 == 0 else "closed form requires even m")
    inv = invariants(x, y, p)
    if abs(p.beta) < p.beta_small_threshold:
        return _plane_wave(inv, p)
    lam = (p.m - 2) // 2
    sa, sb, cb = math.sin(p.alpha), math.sin(p.beta), math.cos(p.beta)
    # J~_{q - 1/2}(t*), q = 0..lam+1
    jt = bessel_j_tilde_sequence(-0.5, lam + 1, inv.t_star)
    s = inv.s

    def block(order, extra_sin, bessel_shift):
        total = np.zeros(s.shape, dtype=complex)
        for pp in range(order + 1):
            for j in range(min(pp, order - pp) + 1):
                coef = _multinomial(order, pp, j) * 1j ** (pp + j) * 2.0 ** (-j)
                coef *= sb ** (2 * pp + extra_sin) * cb ** (order - pp - j) / sa ** (pp - j)
                total = total + coef * s ** (pp - j) * jt[..., pp + bessel_shift]
        return total

    b_sum = block(lam, 0, 0)
    c_sum = (sb / sa) * block(lam, 0, 1)
    a_sum = -1j * lam * block(lam - 1, 1, 1)
    pre = math.sqrt(math.pi / 2) * np.exp(1j * p.beta * lam) * np.exp(-1j * s * cb / sa) * gaussian_phase(inv, p.alpha)
    return KernelValue(p.m, pre * (a_sum + b_sum), inv.wedge * (pre * c_sum)[..., None])


def kernel_closed(x, y, p):
    """Closed-form kernel for any even ``m``."""
    if p.m % 2:
        raise ValueError("closed form requires even m")
    if p.m == 2:
        return kernel_closed_m2(x, y, p)
    return kernel_closed_even(x, y, p)


def kernel(x, y, p, route="auto"):
    """Kernel by the named route: ``auto`` (closed when available), ``closed`` or ``series``."""
    if route == "series" or (route == "auto" and p.m % 2):
        return kernel_series(x, y, p)
    if route in ("auto", "closed"):
        return kernel_closed(x, y, p)
    raise ValueError(f"unknown kernel route {route!r}")


def kernel_cft_reference(x, y, m):
    """Kernel ``K_-`` of the (non-fractional) Clifford-Fourier transform, even ``m >= 4``."""
    if m % 2 or m < 4:
        raise ValueError("the reference kernel is defined for even m >= 4")
    inv = invariants(x, y, KernelParams(math.pi / 2, math.pi / 2, m))
    s, t = inv.s, inv.t
    g = math.gamma(m / 2)
    half = m // 2
    jt = bessel_j_tilde_sequence(-0.5, half, t)  # orders -1/2 .. (m-1)/2

    def jt_order(twice_nu):
        return jt[..., (twice_nu + 1) // 2]

    a_star = np.zeros_like(s)
    for ell in range((m - 3) // 4 + 1):
        c = g / (2 ** ell * math.factorial(ell) * math.gamma(half - 2 * ell - 1))
        a_star = a_star + c * s ** (half - 2 - 2 * ell) * jt_order(m - 2 * ell - 3)
    b_star = np.zeros_like(s)
    c_star = np.zeros_like(s)
    for ell in range((m - 2) // 4 + 1):
        c = g / (2 ** ell * math.factorial(ell) * math.gamma(half - 2 * ell))
        b_star = b_star - c * s ** (half - 1 - 2 * ell) * jt_order(m - 2 * ell - 3)
        c_star = c_star - c * s ** (half - 1 - 2 * ell) * jt_order(m - 2 * ell - 1)
    pre = (-1) ** half * math.sqrt(math.pi / 2)
    return KernelValue(m, (pre * (a_star + b_star)).astype(complex), inv.wedge * (pre * c_star)[..., None].astype(complex))


def kernel_fractional_fourier(x, y, alpha, m=None):
    """Scalar kernel of the fractional Fourier transform of angle ``alpha``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if m is not None and (x.shape[-1] != m or y.shape[-1] != m):
        raise DimensionMismatchError(f"points must have {m} coordinates")
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatchError("x and y have different dimensions")
    sa = math.sin(alpha)
    if abs(sa) < EXCEPTIONAL_TOL:
        raise ExceptionalParameterError(f"alpha={alpha} is exceptional")
    s = np.sum(x * y, axis=-1)
    r2 = np.sum(x * x, axis=-1) + np.sum(y * y, axis=-1)
    return np.exp(-1j * s / sa) * np.exp(0.5j / math.tan(alpha) * r2)


def gamma_exponential_action(k, x, y, beta):
    r"""Closed form of :math:`e^{i\beta\Gamma_y}\,(|x||y|)^k C_k^\lambda(\langle\xi,\eta\rangle)`.

    Requires ``m >= 3`` and non-zero ``x``, ``y``.  Returns a
    :class:`~fracclifft.clifford.Multivector` with grades 0 and 2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = x.shape[-1]
    if y.shape != x.shape or x.ndim != 1:
        raise DimensionMismatchError("x and y must be vectors of equal length")
    if m < 3:
        raise ValueError("gamma_exponential_action requires m >= 3 (lambda > 0)")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ValueError("x and y must be non-zero")
    lam = (m - 2) / 2
    w = float(np.clip(np.dot(x, y) / (nx * ny), -1, 1))
    z = nx * ny
    e_plus = np.exp(1j * beta * (k + m - 2))
    e_minus = np.exp(-1j * beta * k)
    pk = z ** k * gegenbauer_all(k, lam, w)[k]
    scalar = 0.5 * (e_plus + e_minus) * pk - lam / (2 * (k + lam)) * (e_plus - e_minus) * pk
    alg = algebra(m)
    out = np.zeros(alg.dim, dtype=complex)
    out[0] = scalar
    if k >= 1:
        qk = z ** (k - 1) * gegenbauer_all(k - 1, lam + 1, w)[k - 1]
        wedge = np.array([x[a] * y[b] - x[b] * y[a] for a, b in alg.pairs])
        out[alg.pair_blades] = lam / (k + lam) * (e_plus - e_minus) * qk * wedge
    return Multivector(m, out)


@dataclass(frozen=True)
class RecursionReport:
    lam: float
    residual_a: float  # nan when the A recursion does not apply (lam < 2)
    residual_b: float
    residual_c: float
    step: float

    @property
    def max_residual(self):
        vals = [v for v in (self.residual_a, self.residual_b, self.residual_c) if not math.isnan(v)]
        return max(vals)


def _dw(f, w, h):
    # fourth-order central stencil
    return (-f(w + 2 * h) + 8 * f(w + h) - 8 * f(w - h) + f(w - 2 * h)) / (12 * h)


def recursion_check(lam_level, w, z_tilde, alpha, beta, h=1e-4, truncation=None):
    """Check the dimension-lowering recursions of the series coefficients.

    Compares ``A_lam, B_lam, C_lam`` against ``(i e^{i beta} / z~) d/dw`` of
    the level ``lam - 1`` coefficients (with the extra ``lam / (lam - 1)``
    for ``A``), differentiating in ``w`` by central differences at fixed
    ``z~``.  ``lam_level`` is ``(m - 2) / 2`` of the higher dimension.
    """
    lam = float(lam_level)
    if lam < 1 or abs(2 * lam - round(2 * lam)) > 1e-12:
        raise ValueError("lam_level must be an integer or half-integer >= 1")
    if not abs(w) + 2 * h < 1:
        raise ValueError("w must stay inside (-1, 1) for the difference stencil")
    trunc = truncation if truncation is not None else default_truncation(z_tilde) + 10

    def parts(level, ww):
        return series_parts(level, ww, z_tilde, alpha, beta, trunc)

    hi = parts(lam, w)
    factor = 1j * np.exp(1j * beta) / z_tilde
    res = []
    for idx in range(3):
        deriv = _dw(lambda ww: parts(lam - 1, ww)[idx], w, h)
        if idx == 0:
            if lam < 2:
                res.append(float("nan"))
                continue
            deriv = deriv * lam / (lam - 1)
        res.append(float(np.abs(hi[idx] - factor * deriv)))
    return RecursionReport(lam, res[0], res[1], res[2], h)
