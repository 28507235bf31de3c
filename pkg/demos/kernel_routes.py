"""
Three ways to the same kernel
=============================

The two-parameter kernel K_{alpha,beta}(x, y) has a scalar part and a
bivector part.  Here it is evaluated by the Gegenbauer/Bessel series and by
the closed forms, and compared against the scalar fractional Fourier kernel
at beta = 0.
"""

import math

import numpy as np

from fracclifft import KernelParams, kernel_closed, kernel_fractional_fourier, kernel_series

rng = np.random.default_rng(1)

# a batch of point pairs in dimension 4
m = 4
x = rng.normal(size=(500, m))
y = rng.normal(size=(500, m))
p = KernelParams(alpha=0.9, beta=-1.3, m=m)

series = kernel_series(x, y, p)
closed = kernel_closed(x, y, p)
rel = (series - closed).norm() / np.maximum(closed.norm(), 1.0)
print(f"series vs closed form, m={m}: max relative difference {rel.max():.2e}")
print(f"largest series tail estimate: {series.tail.max():.2e}")

# the coefficients live in grades 0 and 2 only
coeffs = closed.coeffs()
print("coefficient array shape:", coeffs.shape)

# at beta = 0 every route collapses to the scalar fractional Fourier kernel
p0 = p.replace(beta=0.0)
ff = kernel_fractional_fourier(x, y, p0.alpha)
print(f"beta = 0: |closed - fractional Fourier| <= {np.abs(kernel_closed(x, y, p0).scalar - ff).max():.1e}")

# beta = pi/2 is regular in the closed form
pq = p.replace(beta=math.pi / 2)
print(f"beta = pi/2: series vs closed {np.max((kernel_series(x, y, pq) - kernel_closed(x, y, pq)).norm()):.2e}")

# a single value as a multivector, m = 2 at alpha = beta = pi/2
k = kernel_closed([1.0, 0.0], [0.0, 1.0], KernelParams(math.pi / 2, math.pi / 2, 2))
print(k.multivector())
