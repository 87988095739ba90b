"""
Grand Morrey norms
==================

Compare Lebesgue, Morrey and grand Morrey norms of a few functions and look
at where the sup over the exponent shift is attained.
"""

import numpy as np

import grandmorrey as gm

sp = gm.gen_interval(64)
x = sp.coords.ravel()

functions = {
    "constant": np.ones(64),
    "spike": (np.abs(x - 0.5) < 0.02).astype(float),
    "power": np.abs(x - 0.5) ** -0.3,
}

p, theta, lam = 2.0, 1.0, 0.3
gp = gm.GrandParams(p, lam, theta)

for name, f in functions.items():
    g = gm.grand_morrey_norm(sp, f, gp, full_output=True)
    print(f"{name:8s} L^p={gm.lebesgue_norm(sp, f, p):.4f} "
          f"Morrey={gm.morrey_norm(sp, f, p, lam):.4f} grand={g.value:.4f} "
          f"(eps={g.eps:.3f}, ball at x={x[g.x]:.3f} radius {g.t:.3f})")

# the weight eps**theta pulls the extremal shift towards p - 1 for flat
# functions and towards small eps for concentrated ones
for theta in (0.5, 1, 2, 4):
    v = gm.grand_morrey_norm(sp, functions["power"], gp.replace(theta=theta), full_output=True)
    print(f"theta={theta}: norm {v.value:.4f} at eps={v.eps:.3f}")

# the sigma split bounds the large shifts by the small ones
c = gm.check_sigma_split(sp, functions["power"], p, theta, lam, sigma=0.3)
print(f"sigma split: {c.lhs:.4f} <= {c.rhs:.4f} -> {c.passed}")
