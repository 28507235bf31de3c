r"""Scalar special functions used by the kernel formulas.

Bessel functions :math:`J_\nu` are supported for the order families the
kernels need: integers and half-integers, :math:`\nu \ge -1`.  Evaluation
uses the ascending series for small arguments and Miller's backward
recurrence otherwise, normalised either by the Neumann sum
:math:`J_0 + 2\sum_k J_{2k} = 1` (integer orders) or by the elementary
forms of :math:`J_{\pm 1/2}` (half-integer orders).

All functions are pure and accept numpy arrays for the argument.
"""

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "UnsupportedOrderError",
    "bessel_j",
    "bessel_j_sequence",
    "bessel_j_tilde",
    "bessel_j_tilde_sequence",
    "gamma_fn",
    "gegenbauer",
    "gegenbauer_all",
    "gegenbauer_coefficients",
    "gegenbauer_lambda0_scaled",
    "laguerre",
    "laguerre_coefficients",
]

MAX_ORDER = 400
# below this argument the ascending series is used directly
SERIES_CUTOFF = 2.0
_SERIES_TERMS = 40
_RESCALE = 1e200


class UnsupportedOrderError(ValueError):
    """Bessel order outside the integer/half-integer families."""


def _check_order(nu):
    twice = 2.0 * nu
    if abs(twice - round(twice)) > 1e-12:
        raise UnsupportedOrderError(f"order {nu} is neither an integer nor a half-integer")
    if nu < -1 or nu > MAX_ORDER:
        raise UnsupportedOrderError(f"order {nu} outside the supported range [-1, {MAX_ORDER}]")
    return round(twice) / 2.0


def gamma_fn(x):
    """Gamma function for real ``x`` that is not a pole.

    Raises
    ------
    ValueError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError(f"gamma has a pole at {x}")
    return math.gamma(x)


def _tilde_series(nu, t):
    """Ascending series of t^{-nu} J_nu(t); entire in t**2."""
    q = -0.25 * np.asarray(t, dtype=float) ** 2
    if nu < 0 and nu == math.floor(nu):
        # J_{-n} = (-1)^n J_n, so t^{n} J_{-n}(t) = (-1)^n t^{2n} J~_n(t)
        n = int(-nu)
        return (-1) ** n * np.asarray(t, dtype=float) ** (2 * n) * _tilde_series(float(n), t)
    term = np.full_like(q, math.exp(-nu * math.log(2.0) - math.lgamma(nu + 1.0)))
    total = term.copy()
    for n in range(1, _SERIES_TERMS):
        term = term * q / (n * (n + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _half_integer_base(x):
    c = np.sqrt(2.0 / (np.pi * x))
    return c * np.cos(x), c * np.sin(x)


def _miller(nu0, top, x):
    """Backward recurrence for J_{nu0..top}(x), x > 0 array, nu0 in {0, -1/2}.

    Returns an array of shape x.shape + (count,) with count = top - nu0 + 1.
    """
    count = int(round(top - nu0)) + 1
    big = max(top, float(np.max(x)))
    start = int(math.ceil(big + 30 + 4.0 * math.sqrt(big)))
    out = np.zeros(x.shape + (count,))
    j_next = np.zeros_like(x)
    j_cur = np.ones_like(x)
    neumann = np.zeros_like(x)
    for k in range(start, -1, -1):
        if k < count:
            out[..., k] = j_cur
        if nu0 == 0.0 and k % 2 == 0:
            neumann = neumann + (j_cur if k == 0 else 2.0 * j_cur)
        if k == 0:
            break
        j_prev = (2.0 * (nu0 + k) / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        over = np.abs(j_cur) > _RESCALE
        if np.any(over):
            f = np.where(over, 1.0 / _RESCALE, 1.0)
            j_cur = j_cur * f
            j_next = j_next * f
            neumann = neumann * f
            out = out * f[..., None]
    if nu0 == 0.0:
        return out / neumann[..., None]
    # least-squares match against both elementary orders: robust near zeros of either
    exact_m, exact_p = _half_integer_base(x)
    size = np.maximum(np.abs(out[..., 0]), np.abs(out[..., 1]))
    trial_m, trial_p = out[..., 0] / size, out[..., 1] / size
    scale = (exact_m * trial_m + exact_p * trial_p) / (trial_m ** 2 + trial_p ** 2) / size
    return out * scale[..., None]


def bessel_j_sequence(nu0, n, x):
    """Return ``J_{nu0 + k}(x)`` for ``k = 0..n``.

    Parameters
    ----------
    nu0 : float
        Lowest order; an integer or half-integer ``>= -1``.
    n : int
        Number of additional orders.
    x : array_like
        Non-negative arguments.

    Returns
    -------
    ndarray
        Shape ``np.shape(x) + (n + 1,)``.
    """
    nu0 = _check_order(nu0)
    _check_order(nu0 + n)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("Bessel argument must be finite and non-negative")
    out = np.empty(x.shape + (n + 1,))
    small = x <= SERIES_CUTOFF
    if np.any(small):
        xs = x[small]
        for k in range(n + 1):
            nu = nu0 + k
            if nu < 0 and nu == math.floor(nu):
                out[small, k] = (-1) ** int(-nu) * bessel_j(-nu, xs)
            else:
                with np.errstate(divide="ignore"):
                    out[small, k] = xs ** nu * _tilde_series(nu, xs)
    large = ~small
    if np.any(large):
        xl = x[large]
        # integer families recur down to order 0, half-integer ones to -1/2
        lo = 0.0 if nu0 == math.floor(nu0) else -0.5
        seq = _miller(lo, max(nu0 + n, lo + 1), xl)
        offset = int(round(nu0 - lo))
        for k in range(n + 1):
            idx = offset + k
            # idx == -1 only for the integer order -1: J_{-1} = -J_1
            out[large, k] = seq[:, idx] if idx >= 0 else -seq[:, 1]
    return out


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``x >= 0``.

    Examples
    --------
    >>> float(bessel_j(0, 0.0))
    1.0
    """
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if nu < 0 and nu == math.floor(nu):
        return (-1) ** int(-nu) * bessel_j(-nu, x)
    return bessel_j_sequence(nu, 0, x)[..., 0]


def bessel_j_tilde_sequence(nu0, n, t):
    """Return ``t^{-nu} J_nu(t)`` for ``nu = nu0 .. nu0 + n``, ``t`` real.

    The function is even in ``t``; negative arguments are folded.  Small
    arguments use the power series so the removable singularity at 0 is
    evaluated analytically.
    """
    nu0 = _check_order(nu0)
    t = np.abs(np.asarray(t, dtype=float))
    out = np.empty(t.shape + (n + 1,))
    small = t <= SERIES_CUTOFF
    if np.any(small):
        ts = t[small]
        for k in range(n + 1):
            out[small, k] = _tilde_series(nu0 + k, ts)
    large = ~small
    if np.any(large):
        tl = t[large]
        seq = bessel_j_sequence(nu0, n, tl)
        orders = nu0 + np.arange(n + 1)
        out[large, :] = seq * np.exp(-orders[None, :] * np.log(tl)[:, None])
    return out


def bessel_j_tilde(nu, t):
    r"""Regularised Bessel function :math:`\tilde J_\nu(t) = t^{-\nu} J_\nu(t)`.

    ``bessel_j_tilde(nu, 0) == 1 / (2**nu * Gamma(nu + 1))``.
    """
    return bessel_j_tilde_sequence(nu, 0, t)[..., 0]


def gegenbauer_all(kmax, lam, w):
    """Gegenbauer polynomials ``C_k^lam(w)`` for ``k = 0..kmax``.

    Returns an array of shape ``np.shape(w) + (kmax + 1,)``.
    """
    if lam <= 0:
        raise ValueError("gegenbauer requires lam > 0; use gegenbauer_lambda0_scaled for lam = 0")
    w = np.asarray(w, dtype=float)
    out = np.empty(w.shape + (kmax + 1,))
    out[..., 0] = 1.0
    if kmax >= 1:
        out[..., 1] = 2.0 * lam * w
    for n in range(2, kmax + 1):
        out[..., n] = (2.0 * w * (n + lam - 1) * out[..., n - 1] - (n + 2 * lam - 2) * out[..., n - 2]) / n
    return out


def gegenbauer(k, lam, w):
    """Gegenbauer polynomial ``C_k^lam(w)`` by the three-term recurrence."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return gegenbauer_all(k, lam, w)[..., k]


def gegenbauer_coefficients(k, lam):
    """Coefficients ``c_n`` with ``C_k^lam(w) = sum_n c_n w^(k - 2n)``."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    return [
        (-1) ** n * math.gamma(k - n + lam) / (math.gamma(lam) * math.factorial(n) * math.factorial(k - 2 * n)) * 2.0 ** (k - 2 * n)
        for n in range(k // 2 + 1)
    ]


def gegenbauer_lambda0_scaled(n, theta):
    """Limit ``lim_{lam->0} C_n^lam(cos theta) / lam = (2/n) cos(n theta)``."""
    if n < 1:
        raise ValueError("the lam -> 0 limit formula requires n >= 1")
    return (2.0 / n) * np.cos(n * np.asarray(theta, dtype=float))


def laguerre(j, a, x):
    """Generalised Laguerre polynomial ``L_j^a(x)`` by forward recurrence."""
    if j < 0:
        raise ValueError("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if j == 0:
        return prev
    cur = 1.0 + a - x
    for n in range(1, j):
        prev, cur = cur, ((2 * n + 1 + a - x) * cur - (n + a) * prev) / (n + 1)
    return cur


def laguerre_coefficients(j, a):
    """Power-series coefficients of ``L_j^a``, lowest degree first.

    Computed in rational arithmetic, so they are correctly rounded for
    integer and half-integer ``a``.
    """
    a = Fraction(a)
    out = []
    for i in range(j + 1):
        # binom(j + a, j - i) / i!
        c = Fraction(1)
        for r in range(1, j - i + 1):
            c *= (a + i + r) / r
        out.append(float((-1) ** i * c / math.factorial(i)))
    return out
