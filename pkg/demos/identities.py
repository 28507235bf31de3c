"""
Checking the kernel's identities
================================

The verification module turns structural identities into residual reports:
first-order and second-order PDE systems, the bound on the kernel, and the
Laguerre-Bessel integral behind the eigenvalues.
"""

import numpy as np

from fracclifft import KernelParams
from fracclifft.verification import (
    check_bounds,
    check_laguerre_hankel,
    check_pde_first_order,
    check_pde_second_order,
    run_suite,
    sample_points,
)

rng = np.random.default_rng(3)
p = KernelParams(alpha=0.8, beta=1.9, m=4)
samples = sample_points(rng, 4, 10)

# finite differences with the step recorded in the report
first = check_pde_first_order(p, samples)
print(first.name, f"{first.max_residual:.1e}", "halving ratio", round(first.metadata["halving_ratio"], 3))
second = check_pde_second_order(p, samples)
print(second.name, f"{second.max_residual:.1e}")

# polynomial growth bound, stable under grid refinement
bounds = check_bounds(KernelParams(1.2, 0.9, 4), n_coarse=30, n_fine=60)
print("bound ratio", bounds.metadata["fine"], "change", bounds.max_residual)

print("Laguerre-Bessel residual", f"{check_laguerre_hankel().max_residual:.1e}")

# the whole quick suite, one line per check
for rep in run_suite():
    print("PASS" if rep.passed else "FAIL", rep.name)
