"""Tails of sums of centred unit vectors against the martingale bound."""

import math

from reprolearn.distributions import SignVectorSource
from reprolearn.halfspace import concentration_probe
from reprolearn.randomness import RandomStream

root = RandomStream(11, ("demo-conc",))
T = 1000
for c in (0.5, 1.0, 1.5, 2.0):
    thr = c * math.sqrt(T)
    r = concentration_probe(SignVectorSource(2), T, 0.0, 5000, root.derive(str(c)), threshold=thr)
    print(f"|sum| >= {c:.1f} sqrt(T): empirical tail {r.tail:.4f}")
thr = 4 * T ** 0.55
r = concentration_probe(SignVectorSource(2), T, 0.0, 5000, root.derive("cor"), threshold=thr)
print(f"at 4 T^0.55 = {thr:.0f}: tail {r.tail:.4f} <= bound {math.exp(-T ** 0.1 / 2):.4f}")
