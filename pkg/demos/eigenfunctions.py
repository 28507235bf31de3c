"""
Eigenfunctions of the transform
===============================

Gaussian-weighted Laguerre polynomials times spherical monogenics are
eigenfunctions.  We build them exactly, check the Hamiltonian and Gamma
eigenvalues symbolically, then transform them by quadrature.
"""

import numpy as np

from fracclifft import KernelParams, QuadratureSpec, eigenvalue, fractional_cft, psi
from fracclifft import gaussian_poly as gp
from fracclifft.transform import BasisExpansion, exceptional_operator

m = 2
p = KernelParams(alpha=1.1, beta=0.7, m=m)
ys = np.random.default_rng(0).uniform(-2, 2, size=(8, m))

labels = [("even", 0, 0, 0), ("odd", 0, 0, 0), ("even", 1, 1, 0), ("odd", 1, 2, 1)]
funcs = [psi(*lab, m) for lab in labels]

# exact operator calculus: H and Gamma act by scalars
for lab, f in zip(labels, funcs):
    h, g = gp.harmonic_eigenvalues(lab[0], lab[1], lab[2], m)
    ok_h = gp.hamiltonian_apply(f).allclose(f * h)
    ok_g = gp.gamma_apply(f).allclose(f * g)
    print(f"psi{lab}: H = {h}, Gamma = {g}, exact: {ok_h and ok_g}")

# one quadrature pass for all four functions
res = fractional_cft(funcs, p, ys, QuadratureSpec(8.0, 120))
print(f"quadrature nodes {res.total_nodes}, change under refinement {res.resolution_change:.1e}")
for lab, f, vals in zip(labels, funcs, res.values):
    lam = eigenvalue(lab[0], lab[1], lab[2], p.alpha, p.beta, m)
    err = np.abs(vals - lam * f.evaluate(ys)).max()
    print(f"psi{lab}: eigenvalue {lam:.6f}, max error {err:.1e}")

# alpha = pi has no integral kernel; on basis expansions it is a reflection
f = BasisExpansion(m, ((1.0, "odd", 0, 0, 0), (0.5j, "even", 1, 2, 1)))
flipped = exceptional_operator(f, np.pi, 0.0, ys)
print("alpha = pi reflects:", np.allclose(flipped, f.evaluate(-ys)))
