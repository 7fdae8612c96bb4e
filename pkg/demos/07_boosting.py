"""Boosting the rounding weak learner at desk scale, round by round."""

import numpy as np

from reprolearn.boosting import strong_halfspace_learner
from reprolearn.distributions import make_finite_margin_source
from reprolearn.randomness import RandomStream

root = RandomStream(7, ("demo-boost",))
src = make_finite_margin_source(2, 0.3, 200, root.derive("src"))
res = strong_halfspace_learner(src, d=2, tau=0.3, rho=0.3, eps=0.2, scheme="box", s=root.derive("r"),
                               data=root.derive("data"), m_override=300, n_pool=3000, n_stat=50_000)
for rec in res.rounds[:: max(1, len(res.rounds) // 8)]:
    exact = src.expect(res.measure(rec.t)(src.points, src.labels))
    print(f"round {rec.t:3d}: estimated density {rec.density_estimate:.3f}, exact {exact:.3f}")
err = src.expect(res.hypothesis(src.points) != src.labels)
print(f"stopped after {len(res.rounds)} rounds; exact error of the vote {err:.4f}")
