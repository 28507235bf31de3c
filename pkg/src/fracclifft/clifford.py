"""Dense Clifford algebra Cl(0, m) over the complex numbers.

Blades are indexed by bitmask: bit ``i - 1`` is set iff ``e_i`` is a factor,
with factors in increasing order.  Coefficient arrays have shape
``(..., 2**m)`` so whole fields of multivectors can be multiplied at once;
:class:`Multivector` wraps a single element.
"""

import functools
import itertools
import json

import numpy as np

__all__ = [
    "Algebra",
    "DimensionMismatchError",
    "Multivector",
    "algebra",
    "blade_index",
    "geometric_product",
    "grade_project",
    "inner_vectors",
    "wedge_vectors",
]

MAX_DIM = 8


class DimensionMismatchError(ValueError):
    """Operands live in algebras (or spaces) of different dimension."""


def blade_index(*indices):
    """Bitmask of the blade ``e_{i1} ... e_{ik}`` (1-based, increasing)."""
    mask = 0
    for i in indices:
        mask |= 1 << (i - 1)
    return mask


def _reorder_sign(a, b):
    # transpositions needed to merge the factors of b past those of a
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


class Algebra:
    """Multiplication tables for Cl(0, m), ``1 <= m <= 8``."""

    def __init__(self, m):
        if not isinstance(m, (int, np.integer)) or not 1 <= m <= MAX_DIM:
            raise ValueError(f"dimension must be an integer in 1..{MAX_DIM}, got {m!r}")
        self.m = int(m)
        self.dim = 1 << self.m
        idx = np.arange(self.dim)
        self.grades = np.array([bin(i).count("1") for i in idx])
        sign = np.empty((self.dim, self.dim), dtype=np.int8)
        for a in range(self.dim):
            for b in range(self.dim):
                # each shared generator squares to -1
                s = _reorder_sign(a, b) * (-1) ** bin(a & b).count("1")
                sign[a, b] = s
        self.sign = sign
        self.sign.setflags(write=False)
        self.pairs = list(itertools.combinations(range(self.m), 2))
        self.pair_blades = np.array([(1 << j) | (1 << k) for j, k in self.pairs], dtype=int)

    def __repr__(self):
        return f"Algebra(m={self.m})"

    def product(self, a, b):
        """Geometric product of coefficient arrays, broadcasting leading axes."""
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape[-1] != self.dim or b.shape[-1] != self.dim:
            raise DimensionMismatchError("coefficient arrays do not match the algebra dimension")
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (self.dim,)
        out = np.zeros(shape, dtype=np.result_type(a, b, complex))
        idx = np.arange(self.dim)
        a_used = np.flatnonzero(np.any(a.reshape(-1, self.dim) != 0, axis=0))
        b_used = np.flatnonzero(np.any(b.reshape(-1, self.dim) != 0, axis=0))
        for i in a_used:
            targets = i ^ idx[b_used]
            contrib = a[..., i, None] * (self.sign[i, b_used] * b[..., b_used])
            out[..., targets] += contrib
        return out

    def vector(self, components):
        """Embed ``(..., m)`` components as grade-1 coefficient arrays."""
        comps = np.asarray(components)
        if comps.shape[-1] != self.m:
            raise DimensionMismatchError(f"expected {self.m} components, got {comps.shape[-1]}")
        out = np.zeros(comps.shape[:-1] + (self.dim,), dtype=np.result_type(comps, complex))
        for i in range(self.m):
            out[..., 1 << i] = comps[..., i]
        return out

    def bivector(self, pair_coeffs):
        """Embed ``(..., m(m-1)/2)`` coefficients on ``e_j e_k`` (j < k)."""
        pc = np.asarray(pair_coeffs)
        out = np.zeros(pc.shape[:-1] + (self.dim,), dtype=np.result_type(pc, complex))
        out[..., self.pair_blades] = pc
        return out

    def grade(self, a, k):
        if not 0 <= k <= self.m:
            raise ValueError(f"grade {k} out of range 0..{self.m}")
        a = np.asarray(a)
        return np.where(self.grades == k, a, 0)

    def basis(self, mask):
        out = np.zeros(self.dim, dtype=complex)
        out[mask] = 1.0
        return out


@functools.lru_cache(maxsize=None)
def algebra(m):
    """Shared :class:`Algebra` instance for dimension ``m``."""
    return Algebra(m)


class Multivector:
    """Immutable element of Cl(0, m) with complex coefficients."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, m, coeffs=None):
        alg = algebra(m)
        if coeffs is None:
            c = np.zeros(alg.dim, dtype=complex)
        else:
            c = np.array(coeffs, dtype=complex)
            if c.shape != (alg.dim,):
                raise DimensionMismatchError(f"expected {alg.dim} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def scalar(cls, m, value):
        c = np.zeros(1 << m, dtype=complex)
        c[0] = value
        return cls(m, c)

    @classmethod
    def blade(cls, m, *indices, coeff=1.0):
        """``coeff * e_{i1} ... e_{ik}``; indices may be unsorted."""
        out = cls.scalar(m, coeff)
        for i in indices:
            if not 1 <= i <= m:
                raise ValueError(f"generator e_{i} does not exist in dimension {m}")
            out = out * cls._generator(m, i)
        return out

    @classmethod
    def _generator(cls, m, i):
        c = np.zeros(1 << m, dtype=complex)
        c[1 << (i - 1)] = 1.0
        return cls(m, c)

    @classmethod
    def vector(cls, components):
        comps = np.asarray(components)
        return cls(len(comps), algebra(len(comps)).vector(comps))

    @property
    def m(self):
        return self.alg.m

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Multivector):
            if other.m != self.m:
                raise DimensionMismatchError(f"cannot combine Cl(0,{self.m}) with Cl(0,{other.m})")
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.m, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.m, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.m, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.m, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.m, self.coeffs * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return geometric_product(self, other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.m, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Multivector(self.m, self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.coeffs.tobytes()))

    def allclose(self, other, atol=1e-12, rtol=0.0):
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("allclose expects a Multivector or a scalar")
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    def grade(self, k):
        return grade_project(self, k)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def __getitem__(self, mask):
        return self.coeffs[mask]

    def __repr__(self):
        terms = []
        for mask in np.flatnonzero(self.coeffs):
            name = "".join(f"e{i + 1}" for i in range(self.m) if mask >> i & 1) or "1"
            terms.append(f"({self.coeffs[mask]:.6g})*{name}")
        return f"Multivector(m={self.m}: " + (" + ".join(terms) or "0") + ")"

    # serialisation
    def to_dict(self):
        return {
            "m": self.m,
            "coeffs": {str(int(i)): [float(self.coeffs[i].real), float(self.coeffs[i].imag)] for i in np.flatnonzero(self.coeffs)},
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        m = int(data["m"])
        c = np.zeros(1 << m, dtype=complex)
        for key, (re, im) in data["coeffs"].items():
            c[int(key)] = complex(re, im)
        return cls(m, c)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def geometric_product(a, b):
    """Geometric product of two multivectors of the same dimension."""
    if a.m != b.m:
        raise DimensionMismatchError(f"cannot multiply Cl(0,{a.m}) by Cl(0,{b.m})")
    return Multivector(a.m, a.alg.product(a.coeffs, b.coeffs))


def _as_components(x):
    if isinstance(x, Multivector):
        return np.array([x.coeffs[1 << i] for i in range(x.m)])
    return np.asarray(x)


def inner_vectors(x, y):
    """Euclidean inner product ``sum_j x_j y_j``."""
    x = _as_components(x)
    y = _as_components(y)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatchError(f"vectors of length {x.shape[-1]} and {y.shape[-1]}")
    return np.sum(x * y, axis=-1)


def wedge_vectors(x, y):
    """Bivector ``x ^ y = sum_{j<k} e_j e_k (x_j y_k - x_k y_j)``."""
    x = _as_components(x)
    y = _as_components(y)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatchError(f"vectors of shape {x.shape} and {y.shape}")
    alg = algebra(len(x))
    pc = np.array([x[j] * y[k] - x[k] * y[j] for j, k in alg.pairs])
    return Multivector(alg.m, alg.bivector(pc) if len(pc) else np.zeros(alg.dim))


def grade_project(a, k):
    """Grade-``k`` part of ``a``."""
    return Multivector(a.m, a.alg.grade(a.coeffs, k))
