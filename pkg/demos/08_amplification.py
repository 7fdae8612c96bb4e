"""Turning a mostly-stable algorithm into a reproducible one.

A majority of 5 flips of coin(0.9) returns 1 about 99% of the time.  Heavy
hitters over its output distribution, with a shared threshold, make the
answer reproducible.
"""

from reprolearn.distributions import CoinSource
from reprolearn.meta import amplify, amplify_params, estimate_eta_nu, majority_vote_handle
from reprolearn.randomness import RandomStream

root = RandomStream(8, ("demo-amplify",))
A = majority_vote_handle(0.9, 5)
est = estimate_eta_nu(A, CoinSource(0.9), 10, 2000, root.derive("eta"), eta=0.2)
print(f"eta_hat per random string: {[round(e, 3) for e in est.eta_hat]}; nu_hat {est.nu_hat}")
k, hp = amplify_params(0.2, 0.1, 0.05)
print(f"rounds k={k}, heavy-hitter v={hp.v:.2f} eps={hp.eps:.2f}")
agree = 0
for i in range(50):
    r = root.derive(f"t{i}")
    a = amplify(A, 0.2, 0.1, 0.05, 0.1, CoinSource(0.9), r.copy(), root.derive(f"a{i}"))
    b = amplify(A, 0.2, 0.1, 0.05, 0.1, CoinSource(0.9), r.copy(), root.derive(f"b{i}"))
    agree += a.output == b.output
print(f"amplified agreement {agree}/50; examples per run {a.draws:.3g}")
