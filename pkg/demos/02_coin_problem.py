"""How non-reproducibility of the coin decision falls with the sample size."""

from reprolearn.harness import coin_scaling_fit, coin_sweep, log_spaced
from reprolearn.randomness import RandomStream

ms = log_spaced(100, 1e5, 6)
rows = coin_sweep(ms, tau=0.1, trials=500, s=RandomStream(2, ("demo-coin",)))
print(f"{'m':>7} {'rho_hat':>8} {'ci95':>17} {'success':>8}")
for r in rows:
    print(f"{r['m']:7d} {r['rho_hat']:8.3f}  [{r['ci_lo']:.3f}, {r['ci_hi']:.3f}] {r['success_rate']:8.3f}")
fit = coin_scaling_fit(rows)
print(f"log-log slope {fit.slope:.3f} (a 1/sqrt(m) law gives -0.5); consistent: {fit.consistent}")
