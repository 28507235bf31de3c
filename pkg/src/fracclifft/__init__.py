"""Fractional Clifford-Fourier transform: kernels, exact basis calculus and quadrature.

The kernel ``K_{alpha,beta}(x, y)`` of the two-parameter transform
``exp(i(-alpha H + beta Gamma))`` is available through three independent
routes (a Gegenbauer/Bessel series and closed forms for even dimension),
together with an exact calculus on Gaussian-weighted Clifford polynomials,
numerical transforms, and executable checks of the kernel's identities.
"""

from .clifford import Algebra, DimensionMismatchError, Multivector, algebra, inner_vectors, wedge_vectors
from .gaussian_poly import CliffordPolynomial, GaussianPolynomial, monogenic_basis, psi_basis
from .kernel import (
    ExceptionalParameterError,
    KernelParams,
    KernelValue,
    UnvalidatedRegimeWarning,
    invariants,
    kernel,
    kernel_cft_reference,
    kernel_closed,
    kernel_closed_even,
    kernel_closed_m2,
    kernel_fractional_fourier,
    kernel_series,
)
from .transform import QuadratureSpec, eigenvalue, fractional_cft, normalization_constant, psi
from .verification import ResidualReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "CliffordPolynomial",
    "DimensionMismatchError",
    "ExceptionalParameterError",
    "GaussianPolynomial",
    "KernelParams",
    "KernelValue",
    "Multivector",
    "QuadratureSpec",
    "ResidualReport",
    "UnvalidatedRegimeWarning",
    "algebra",
    "eigenvalue",
    "fractional_cft",
    "inner_vectors",
    "invariants",
    "kernel",
    "kernel_cft_reference",
    "kernel_closed",
    "kernel_closed_even",
    "kernel_closed_m2",
    "kernel_fractional_fourier",
    "kernel_series",
    "monogenic_basis",
    "normalization_constant",
    "psi",
    "psi_basis",
    "run_suite",
    "wedge_vectors",
]
