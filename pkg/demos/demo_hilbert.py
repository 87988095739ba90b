"""
A discrete Hilbert transform
============================

The kernel 1/(x - y) on the interval is the model singular integral.  Check
its size and smoothness constants, then estimate its L^2 norm two ways.
"""

import numpy as np

import grandmorrey as gm
from grandmorrey.analysis import estimate_operator_norm
from grandmorrey.norms import MorreyParams
from grandmorrey.operators import weighted_kernel_matrix

sp = gm.gen_interval(64)
k = gm.hilbert_kernel(sp)

kc = gm.kernel_check(sp, k)
print(f"size {kc.c_size:.3f}, smoothness {kc.c_smooth:.3f}, "
      f"dini {kc.dini_value:.6f}, gates {kc.gate_count}")

# dense singular values of the symmetrized weighted matrix
A = weighted_kernel_matrix(sp, k)
s = np.sqrt(sp.weights)
print(f"largest singular value {np.linalg.norm(s[:, None] * A / s[None, :], 2):.5f}")

# random family, then a few power-iteration steps from its best member
l2 = MorreyParams(2.0)
family = gm.gen_test_family(sp, "gaussian", 200, seed=0)
op = lambda f: gm.cz_apply(sp, f, k).values  # noqa: E731
raw = estimate_operator_norm(sp, op, l2, l2, family)
ref = estimate_operator_norm(sp, op, l2, l2, family, refine_steps=50,
                             adjoint=lambda g: gm.cz_adjoint(sp, g, k))
print(f"family estimate {raw.sup_ratio:.5f}, refined {ref.sup_ratio:.5f}")

# grand Morrey stability for p away from 2
fam = gm.gen_test_family(sp, "mixed", 100, seed=1)
for p in (1.5, 3.0):
    rep = gm.verify_theorem(sp, "3.1", {"p": p, "theta": 1, "lam": 0.3, "kernel": k}, fam)
    print(f"p={p}: sup ratio {rep.scalars['sup_ratio']:.3f}, stability {rep.scalars['stability']:.3f}")
