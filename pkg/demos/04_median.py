"""Approximate median over 4-bit integers at desk-scale sample sizes.

The full constants ask for billions of draws; here the batch, query and
heavy-hitter sizes are overridden and the structure of each level is shown.
"""

from reprolearn.distributions import uniform_discrete
from reprolearn.median import MedianParams, cdf_position_ok, median_plan, median_sample_size, r_median_trace
from reprolearn.randomness import RandomStream

p = MedianParams(rho=0.5, d=4, tau=0.2, overrides=dict(n_m=15, n_sq=300, n_sq_base=300, q1=30, q2=300))
for d, plan in sorted(median_plan(p).items()):
    print(f"level d={d}: {plan.n_total} draws (batch {plan.n_m}, medians {plan.n_meds})")
src = uniform_discrete(4)
n = median_sample_size(p)
root = RandomStream(4, ("demo-median",))
for i in range(5):
    res = r_median_trace(src.sample(n, root.derive(f"x{i}")), p, root.derive(f"r{i}"))
    top = res.levels[-1]
    print(f"run {i}: output {res.output:2d} ({res.output:04b}), prefix length {top.ell}, candidates "
          f"{top.candidates}, masses {[round(m, 3) for m in top.masses]}, fallback {top.fallback}, "
          f"CDF ok {cdf_position_ok(src.pmf, res.output, p.tau)}")
