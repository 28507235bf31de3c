r"""Exact operator calculus on Clifford-valued polynomials.

A :class:`CliffordPolynomial` is a finite sum of monomials
:math:`x_1^{\nu_1}\cdots x_m^{\nu_m}` with multivector coefficients.  A
:class:`GaussianPolynomial` represents ``P(x) exp(-|x|^2 / 2)`` and is closed
under differentiation, so the Dirac, Laplace, Euler, Gamma and harmonic
oscillator operators act without any discretisation.

Coefficients are complex floating point; "exact" means free of truncation or
quadrature error.

Examples
--------
>>> x = CliffordPolynomial.coordinate(3, 0)
>>> dirac_apply(CliffordPolynomial.vector_variable(3)).coeff((0, 0, 0))[0]
(-3+0j)
"""

import json

import numpy as np

from .clifford import DimensionMismatchError, Multivector, algebra
from .special import laguerre_coefficients

__all__ = [
    "CliffordPolynomial",
    "GaussianPolynomial",
    "NotEigenvectorError",
    "NotMonogenicError",
    "dirac_apply",
    "dirac_right_apply",
    "euler_apply",
    "gamma_apply",
    "hamiltonian_apply",
    "laplace_apply",
    "monogenic_basis",
    "monogenic_m2",
    "monogenic_project",
    "operator_exponential",
    "basis_index",
    "harmonic_eigenvalues",
    "psi_basis",
    "vector_left",
    "vector_right",
]

_TOL = 1e-12


class NotMonogenicError(ValueError):
    """Input is not annihilated by the Dirac operator."""


class NotEigenvectorError(ValueError):
    """Input is not a joint eigenvector of H and Gamma."""


def _shift(exps, j, d):
    e = list(exps)
    e[j] += d
    return tuple(e)


class CliffordPolynomial:
    """Polynomial in ``x_1..x_m`` with coefficients in Cl(0, m).

    Parameters
    ----------
    m : int
        Dimension.
    terms : dict, optional
        Map from exponent tuples to coefficient arrays of length ``2**m``
        (or :class:`Multivector` / scalars).
    """

    __slots__ = ("m", "alg", "_terms")

    def __init__(self, m, terms=None):
        self.alg = algebra(m)
        self.m = self.alg.m
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.m or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent tuple {exps} for m={self.m}")
            arr = self._coeff_array(c)
            if np.any(arr != 0):
                if exps in clean:
                    arr = clean[exps] + arr
                clean[exps] = arr
        for arr in clean.values():
            arr.setflags(write=False)
        self._terms = clean

    def _coeff_array(self, c):
        if isinstance(c, Multivector):
            if c.m != self.m:
                raise DimensionMismatchError(f"coefficient from Cl(0,{c.m}) in dimension {self.m}")
            return np.array(c.coeffs)
        arr = np.asarray(c, dtype=complex)
        if arr.ndim == 0:
            out = np.zeros(self.alg.dim, dtype=complex)
            out[0] = arr
            return out
        if arr.shape != (self.alg.dim,):
            raise DimensionMismatchError(f"coefficient must have {self.alg.dim} entries")
        return arr.copy()

    # constructors
    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def constant(cls, m, c=1.0):
        return cls(m, {(0,) * m: c})

    @classmethod
    def coordinate(cls, m, j, coeff=1.0):
        """``coeff * x_{j+1}`` (``j`` is 0-based)."""
        return cls(m, {_shift((0,) * m, j, 1): coeff})

    @classmethod
    def vector_variable(cls, m):
        """The vector variable ``x = sum_j e_j x_j``."""
        alg = algebra(m)
        return cls(m, {_shift((0,) * m, j, 1): alg.basis(1 << j) for j in range(m)})

    @classmethod
    def norm_squared(cls, m):
        return cls(m, {_shift((0,) * m, j, 2): 1.0 for j in range(m)})

    # access
    @property
    def terms(self):
        return dict(self._terms)

    def coeff(self, exps):
        return self._terms.get(tuple(exps), np.zeros(self.alg.dim, dtype=complex))

    def degree(self):
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self, k=None):
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def max_abs(self):
        """Largest coefficient magnitude (coefficientwise sup norm)."""
        return max((float(np.max(np.abs(c))) for c in self._terms.values()), default=0.0)

    def is_zero(self, tol=0.0):
        return self.max_abs() <= tol

    # arithmetic
    def _check(self, other):
        if other.m != self.m:
            raise DimensionMismatchError(f"cannot combine dimension {self.m} with {other.m}")

    def __add__(self, other):
        if not isinstance(other, CliffordPolynomial):
            other = CliffordPolynomial.constant(self.m, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return CliffordPolynomial(self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordPolynomial(self.m, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CliffordPolynomial):
            self._check(other)
            out = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    prod = self.alg.product(c1, c2)
                    out[e] = out[e] + prod if e in out else prod
            return CliffordPolynomial(self.m, out)
        if isinstance(other, Multivector):
            return self * CliffordPolynomial.constant(self.m, other)
        if np.isscalar(other):
            return CliffordPolynomial(self.m, {e: c * other for e, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return CliffordPolynomial.constant(self.m, other) * self
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a non-negative integer")
        out = CliffordPolynomial.constant(self.m)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CliffordPolynomial):
            return NotImplemented
        return self.m == other.m and (self - other).is_zero()

    __hash__ = None

    def allclose(self, other, atol=1e-13):
        return (self - other).max_abs() <= atol

    # calculus
    def partial(self, j):
        """``d/dx_{j+1}``."""
        out = {}
        for e, c in self._terms.items():
            if e[j]:
                out[_shift(e, j, -1)] = e[j] * c
        return CliffordPolynomial(self.m, out)

    def times_coordinate(self, j):
        return CliffordPolynomial(self.m, {_shift(e, j, 1): c for e, c in self._terms.items()})

    def grade(self, k):
        return CliffordPolynomial(self.m, {e: self.alg.grade(c, k) for e, c in self._terms.items()})

    def evaluate(self, x):
        """Coefficient arrays ``(..., 2**m)`` at points ``x`` of shape ``(..., m)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.m:
            raise DimensionMismatchError(f"points must have {self.m} coordinates")
        out = np.zeros(x.shape[:-1] + (self.alg.dim,), dtype=complex)
        for e, c in self._terms.items():
            mono = np.ones(x.shape[:-1])
            for j, p in enumerate(e):
                if p:
                    mono = mono * x[..., j] ** p
            out += mono[..., None] * c
        return out

    __call__ = evaluate

    def __repr__(self):
        return f"CliffordPolynomial(m={self.m}, terms={len(self._terms)}, degree={self.degree()})"

    # serialisation
    def to_dict(self):
        return {
            "m": self.m,
            "terms": [
                {"exps": list(e), "coeff": Multivector(self.m, c).to_dict()} for e, c in sorted(self._terms.items())
            ],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        m = int(data["m"])
        return cls(m, {tuple(t["exps"]): Multivector.from_dict(t["coeff"]) for t in data["terms"]})

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


class GaussianPolynomial:
    """``poly(x) * exp(-|x|^2 / 2)``; operators act on ``poly`` by the product rule."""

    __slots__ = ("poly",)

    def __init__(self, poly):
        if not isinstance(poly, CliffordPolynomial):
            raise TypeError("GaussianPolynomial wraps a CliffordPolynomial")
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianPolynomial is immutable")

    @property
    def m(self):
        return self.poly.m

    def _wrap(self, poly):
        return GaussianPolynomial(poly)

    def __add__(self, other):
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        return GaussianPolynomial(self.poly + other.poly)

    def __sub__(self, other):
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        return GaussianPolynomial(self.poly - other.poly)

    def __neg__(self):
        return GaussianPolynomial(-self.poly)

    def __mul__(self, other):
        if isinstance(other, (Multivector, CliffordPolynomial)) or np.isscalar(other):
            return GaussianPolynomial(self.poly * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Multivector, CliffordPolynomial)):
            return GaussianPolynomial(other * self.poly)
        if np.isscalar(other):
            return GaussianPolynomial(self.poly * other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GaussianPolynomial):
            return NotImplemented
        return self.poly == other.poly

    __hash__ = None

    def max_abs(self):
        return self.poly.max_abs()

    def allclose(self, other, atol=1e-13):
        return self.poly.allclose(other.poly, atol)

    def partial(self, j):
        return GaussianPolynomial(self.poly.partial(j) - self.poly.times_coordinate(j))

    def times_coordinate(self, j):
        return GaussianPolynomial(self.poly.times_coordinate(j))

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        g = np.exp(-0.5 * np.sum(x * x, axis=-1))
        return self.poly.evaluate(x) * g[..., None]

    __call__ = evaluate

    def __repr__(self):
        return f"GaussianPolynomial({self.poly!r})"

    def to_dict(self):
        d = self.poly.to_dict()
        d["gaussian"] = True
        return d

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        return cls(CliffordPolynomial.from_dict(data))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _basis(f, j):
    return f.poly.alg.basis(1 << j) if isinstance(f, GaussianPolynomial) else f.alg.basis(1 << j)


def _left(f, mv):
    if isinstance(f, GaussianPolynomial):
        return GaussianPolynomial(CliffordPolynomial.constant(f.m, mv) * f.poly)
    return CliffordPolynomial.constant(f.m, mv) * f


def _right(f, mv):
    if isinstance(f, GaussianPolynomial):
        return GaussianPolynomial(f.poly * CliffordPolynomial.constant(f.m, mv))
    return f * CliffordPolynomial.constant(f.m, mv)


def _sum(parts):
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def dirac_apply(f):
    """Left Dirac operator ``sum_j e_j d/dx_j``."""
    return _sum([_left(f.partial(j), _basis(f, j)) for j in range(f.m)])


def dirac_right_apply(f):
    """Dirac operator acting from the right, ``sum_j (d/dx_j f) e_j``."""
    return _sum([_right(f.partial(j), _basis(f, j)) for j in range(f.m)])


def vector_left(f):
    """Left multiplication by the vector variable ``x``."""
    return _sum([_left(f.times_coordinate(j), _basis(f, j)) for j in range(f.m)])


def vector_right(f):
    """Right multiplication by the vector variable ``x``."""
    return _sum([_right(f.times_coordinate(j), _basis(f, j)) for j in range(f.m)])


def laplace_apply(f):
    return _sum([f.partial(j).partial(j) for j in range(f.m)])


def euler_apply(f):
    return _sum([f.partial(j).times_coordinate(j) for j in range(f.m)])


def gamma_apply(f):
    r"""Gamma operator :math:`-\sum_{j<k} e_j e_k (x_j \partial_k - x_k \partial_j)`.

    On a :class:`GaussianPolynomial` it acts on the polynomial factor only,
    since Gamma commutes with radial functions.
    """
    if isinstance(f, GaussianPolynomial):
        return GaussianPolynomial(gamma_apply(f.poly))
    alg = f.alg
    out = CliffordPolynomial.zero(f.m)
    for (j, k), blade in zip(alg.pairs, alg.pair_blades):
        ang = f.partial(k).times_coordinate(j) - f.partial(j).times_coordinate(k)
        out = out - CliffordPolynomial.constant(f.m, alg.basis(blade)) * ang
    return out


def hamiltonian_apply(f):
    """Harmonic oscillator ``H = (-Delta + |x|^2 - m) / 2``."""
    if not isinstance(f, GaussianPolynomial):
        raise TypeError("hamiltonian_apply expects a GaussianPolynomial")
    r2f = _sum([f.times_coordinate(j).times_coordinate(j) for j in range(f.m)])
    return (r2f - laplace_apply(f) - f * f.m) * 0.5


def _eigenvalue(f, g, name):
    # ratio of g to f, validated coefficientwise
    fp, gp = f.poly, g.poly
    key = max(fp._terms, key=lambda e: np.max(np.abs(fp._terms[e])))
    idx = int(np.argmax(np.abs(fp._terms[key])))
    lam = gp.coeff(key)[idx] / fp._terms[key][idx]
    scale = max(fp.max_abs(), 1.0)
    if (gp - fp * lam).max_abs() > 1e-10 * scale * max(1.0, abs(lam)):
        raise NotEigenvectorError(f"input is not an eigenvector of {name}")
    return lam


def operator_exponential(f, alpha, beta):
    r"""Apply :math:`e^{i(-\alpha H + \beta\Gamma)}` to a joint eigenvector.

    The eigenvalues of ``H`` and ``Gamma`` are read off exactly and the
    input is rescaled; general inputs raise :class:`NotEigenvectorError`.
    """
    if f.poly.is_zero():
        return f
    h = _eigenvalue(f, hamiltonian_apply(f), "H")
    g = _eigenvalue(f, gamma_apply(f), "Gamma")
    h, g = round(h.real), round(g.real)
    return f * complex(np.exp(1j * (-alpha * h + beta * g)))


def monogenic_m2(k):
    """Spherical monogenics of degree ``k`` in dimension 2.

    Returns ``(P, P e_1)`` with ``P = (x_1 - e_1 e_2 x_2)^k``.
    """
    if k < 0:
        raise ValueError("degree must be non-negative")
    alg = algebra(2)
    z = CliffordPolynomial(2, {(1, 0): 1.0, (0, 1): -alg.basis(0b11)})
    p = z ** k
    return p, p * Multivector.blade(2, 1)


def monogenic_project(h, k):
    """Monogenic part ``M_k`` of a harmonic homogeneous polynomial ``h = M_k + x M_{k-1}``.

    Raises
    ------
    ValueError
        If ``h`` is not homogeneous of degree ``k`` or not harmonic.
    """
    if not isinstance(h, CliffordPolynomial):
        raise TypeError("expected a CliffordPolynomial")
    if not h.is_homogeneous(k):
        raise ValueError(f"polynomial is not homogeneous of degree {k}")
    scale = max(h.max_abs(), 1.0)
    if laplace_apply(h).max_abs() > _TOL * scale:
        raise ValueError("polynomial is not harmonic")
    dh = dirac_apply(h)
    if dh.is_zero():
        return h
    return h + vector_left(dh) * (1.0 / (2 * k + h.m - 2))


def _laguerre_poly(j, a, m):
    r2 = CliffordPolynomial.norm_squared(m)
    out = CliffordPolynomial.zero(m)
    power = CliffordPolynomial.constant(m)
    for c in laguerre_coefficients(j, a):
        out = out + power * c
        power = power * r2
    return out


def psi_basis(parity, j, k, mk=None, m=None):
    """Basis function ``psi_{2j,k}`` (``parity='even'``) or ``psi_{2j+1,k}`` (``'odd'``).

    Parameters
    ----------
    parity : {'even', 'odd'}
    j, k : int
        Laguerre degree and monogenic degree.
    mk : CliffordPolynomial, optional
        Spherical monogenic of degree ``k``; defaults to the constant 1
        when ``k = 0``.
    m : int, optional
        Dimension, required only when ``mk`` is omitted.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if j < 0 or k < 0:
        raise ValueError("indices must be non-negative")
    if mk is None:
        if k != 0 or m is None:
            raise ValueError("mk is required unless k = 0 and m is given")
        mk = CliffordPolynomial.constant(m)
    if not isinstance(mk, CliffordPolynomial):
        raise TypeError("mk must be a CliffordPolynomial")
    if not mk.is_homogeneous(k) or mk.is_zero():
        raise NotMonogenicError(f"mk is not a non-zero homogeneous polynomial of degree {k}")
    if dirac_apply(mk).max_abs() > _TOL * max(mk.max_abs(), 1.0):
        raise NotMonogenicError("mk is not annihilated by the Dirac operator")
    mdim = mk.m
    if parity == "even":
        poly = _laguerre_poly(j, mdim / 2 + k - 1, mdim) * mk
    else:
        poly = _laguerre_poly(j, mdim / 2 + k, mdim) * vector_left(mk)
    return GaussianPolynomial(poly)


def basis_index(parity, j, k):
    """Index ``2j + k`` (even) or ``2j + 1 + k`` (odd): the H eigenvalue."""
    return 2 * j + k + (1 if parity == "odd" else 0)


def harmonic_eigenvalues(parity, j, k, m):
    """Exact ``(H, Gamma)`` eigenvalues of ``psi``."""
    if parity == "even":
        return 2 * j + k, -k
    return 2 * j + 1 + k, k + m - 1



def monogenic_basis(m, k):
    """A list of linearly independent spherical monogenics of degree ``k``.

    Dimension 2 returns the pair from :func:`monogenic_m2`.  Otherwise the
    harmonics ``(x_a + i x_b)^k`` (``a < b``) are projected onto their
    monogenic parts; the list is not claimed to span the whole space.
    """
    if m == 2:
        return list(monogenic_m2(k))
    if k == 0:
        return [CliffordPolynomial.constant(m)]
    out = []
    for a in range(m):
        for b in range(a + 1, m):
            lin = CliffordPolynomial(m, {_shift((0,) * m, a, 1): 1.0, _shift((0,) * m, b, 1): 1j})
            mk = monogenic_project(lin ** k, k)
            if not mk.is_zero(1e-14):
                out.append(mk)
    return out
