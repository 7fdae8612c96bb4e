"""Reproducible statistical queries on a fair coin.

Two analysts draw independent samples but share a random offset.  Each rounds
the empirical mean to the midpoint of its offset interval, so they usually
report the very same number.
"""

import numpy as np

from reprolearn.distributions import CoinSource
from reprolearn.randomness import RandomStream
from reprolearn.sq import IDENTITY, SqParams, rstat_sample_size, rstat_trace

p = SqParams(tau=0.1, rho=0.2, delta=0.01)
n = rstat_sample_size(p)
print(f"alpha = {p.alpha:.4f}, sampling tolerance = {p.tau_prime:.4f}, n = {n}")

root = RandomStream(1, ("demo-rstat",))
coin = CoinSource(0.5)
shared = root.derive("shared")
for who in ("alice", "bob"):
    tr = rstat_trace(IDENTITY, coin.sample(n, root.derive(who)), p, shared.copy())
    print(f"{who:5s}: empirical {tr.empirical:.5f} -> reported {tr.output:.5f} (offset {tr.alpha_off:.4f})")

agree = 0
trials = 500
for i in range(trials):
    r = root.derive(f"trial{i}")
    a = rstat_trace(IDENTITY, coin.sample(n, root.derive(f"a{i}")), p, r.copy()).output
    b = rstat_trace(IDENTITY, coin.sample(n, root.derive(f"b{i}")), p, r.copy()).output
    agree += a == b
print(f"paired agreement over {trials} trials: {agree / trials:.3f} (guarantee >= {1 - p.rho})")
