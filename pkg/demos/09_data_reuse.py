"""Adaptive queries answered from one sample versus fresh samples.

For every shared random string the two transcript distributions are
enumerated exactly; raw empirical means leak the sample and drift apart.
"""

from reprolearn.meta import data_reuse_experiment, identity_then_flip
from reprolearn.randomness import RandomStream
from reprolearn.sq import SqParams, rstat_sample_size

p = SqParams(0.1, 0.1, 0.01)
root = RandomStream(9, ("demo-reuse",))
for n in (400, 4000, rstat_sample_size(p)):
    rs = data_reuse_experiment(identity_then_flip, 2, p, n, 50, root.derive(f"r{n}"))
    raw = data_reuse_experiment(identity_then_flip, 2, p, n, 5, root.derive(f"raw{n}"), mechanism="raw")
    print(f"n={n:6d}: rounded TV {rs.tv:.2e} (max {rs.tv_max:.2e}), raw TV {raw.tv:.3f}, bound {rs.bound}")
