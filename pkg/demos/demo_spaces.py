"""
Finite spaces of homogeneous type
=================================

Build the stock spaces and look at their doubling, Ahlfors and
reverse-doubling constants.
"""

import math

import numpy as np

import grandmorrey as gm

spaces = {
    "interval(64)": (gm.gen_interval(64), 1.0),
    "cube(8, 2)": (gm.gen_cube(8, 2), 2.0),
    "cantor(5)": (gm.gen_cantor(5), math.log(2) / math.log(3)),
    "random(48)": (gm.gen_random(48, seed=0), 1.0),
}

# regularity() bundles the estimators; every sup over radii is exact
for name, (sp, gamma) in spaces.items():
    rep = gm.regularity(sp, gamma, alpha_bar=0.5)
    print(f"{name:13s} b={rep.b_doubling:.3f} ahlfors=({rep.b_upper:.3f}, {rep.c_lower:.3f}) "
          f"beta={rep.beta:.3f} a_bar={rep.a_bar:.1f}")

# a snowflaked distance is again a metric, so a0 = a1 = 1 ...
sp = gm.snowflake(gm.gen_interval(32), 0.5)
print("snowflake constants:", gm.verify_quasimetric(sp))

# ... while a power above one only gives a quasi-metric
d = np.asarray(gm.gen_interval(32).dist) ** 2
print("squared distance constants:", gm.verify_quasimetric(gm.build_space(d, np.full(32, 1 / 32))))
