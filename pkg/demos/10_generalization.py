"""Reproducible learners generalize: true risk rarely exceeds training risk by much."""

from reprolearn.distributions import make_finite_margin_source
from reprolearn.halfspace import WklParams, r_halfspace_wkl
from reprolearn.harness import estimate_reproducibility
from reprolearn.meta import AlgorithmHandle, generalization_check
from reprolearn.randomness import RandomStream

root = RandomStream(10, ("demo-gen",))
src = make_finite_margin_source(2, 0.3, 20, root.derive("src"))
for m in (200, 1000, 5000):
    p = WklParams(0.1, 2, 0.3, "box", m_override=m)
    A = AlgorithmHandle(lambda x, r, p=p: r_halfspace_wkl(x, p, r), m)
    g = generalization_check(A, src, m, 0, 0.1, 200, root.derive(f"r{m}"), root.derive(f"d{m}"))
    rep = estimate_reproducibility(A, src, 100, root.derive(f"p{m}"))
    print(f"m={m:5d}: slack {g.slack:.3f}, violation rate {g.violation_rate:.3f}, rho_hat {1 - rep.repro_rate:.2f}")
