"""The rounding weak learner on an exact 8-point margin source."""

import numpy as np

from reprolearn.distributions import make_finite_margin_source
from reprolearn.halfspace import (WklParams, direction, exact_advantage, expected_weighted_vector,
                                  r_halfspace_wkl_trace)
from reprolearn.randomness import RandomStream

root = RandomStream(6, ("demo-wkl",))
src = make_finite_margin_source(2, 0.3, 8, root.derive("src"))
h_star = direction(expected_weighted_vector(src))
print(f"expected-vector hypothesis advantage {exact_advantage(h_star, src):.4f} (margin/2 = 0.15)")

for m in (300, 3000, 30000):
    p = WklParams(rho=0.1, d=2, tau=0.3, scheme="box", m_override=m)
    same = 0
    for i in range(100):
        r = root.derive(f"{m}/{i}")
        a = r_halfspace_wkl_trace(src.sample(m, root.derive(f"a{m}/{i}")), p, r.copy())
        b = r_halfspace_wkl_trace(src.sample(m, root.derive(f"b{m}/{i}")), p, r.copy())
        same += a.hypothesis == b.hypothesis
    adv = exact_advantage(a.hypothesis, src)
    print(f"m={m:6d}: k*|z| ~ {np.linalg.norm(a.k * a.z):6.2f}, identical pairs {same}/100, "
          f"advantage {adv:.3f}, budget {p.budget():.3g}")
