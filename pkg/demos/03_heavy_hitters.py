"""Heavy hitters with a random threshold, at the full sample sizes.

The estimation step draws multinomial counts, which have the same law as
counting the Q2 (about 1.3e10) draws one by one.
"""

from reprolearn.distributions import from_mapping
from reprolearn.heavy_hitters import HhParams, hh_events, hh_sample_sizes, r_heavy_hitters_trace
from reprolearn.randomness import RandomStream

src = from_mapping(2, {0: 0.6, 1: 0.3, 2: 0.1})
p = HhParams(rho=0.1, v=0.45, eps=0.05)
print("sample sizes (Q1, Q2):", hh_sample_sizes(p))

root = RandomStream(3, ("demo-hh",))
for i in range(3):
    r = root.derive(f"r{i}")
    a = r_heavy_hitters_trace(src, p, r.copy(), root.derive(f"a{i}"))
    b = r_heavy_hitters_trace(src, p, r.copy(), root.derive(f"b{i}"))
    est = {k: round(v, 4) for k, v in a.estimates.items()}
    print(f"threshold {a.v_prime:.4f}: run a {set(a.output)} est {est}; run b {set(b.output)}")
    print("   events:", hh_events(a, src.exact_pmf(), p))
