"""Independent reference computations used by the tests.

Nothing here imports the package: each oracle recomputes its quantity from
first principles (exact integer arithmetic where possible) so a shared bug
cannot make a test pass.
"""

import math
from fractions import Fraction


def binomial_cdf_below(n, p, m):
    """Pr[Bin(n, p) < m] with exact rational arithmetic (p a Fraction or float)."""
    p = Fraction(p)
    q = 1 - p
    return float(sum(math.comb(n, k) * p ** k * q ** (n - k) for k in range(m)))


def rademacher_tail(T, t):
    """Pr[|sum of T fair signs| >= t]."""
    hits = sum(math.comb(T, b) for b in range(T + 1) if abs(2 * b - T) >= t)
    return float(Fraction(hits, 2 ** T))


def interval_regions(alpha, off):
    """Explicit list of the rounding regions on [0, 1]."""
    regions = []
    if off > 0:
        regions.append((0.0, off))
    i = 0
    while off + i * alpha < 1.0:
        lo = off + i * alpha
        regions.append((lo, min(lo + alpha, 1.0)))
        i += 1
    return regions


def interval_round(v, alpha, off):
    regs = interval_regions(alpha, off)
    for i, (lo, hi) in enumerate(regs):
        last = i == len(regs) - 1
        if lo <= v < hi or (last and v == hi):
            return (lo + hi) / 2
    raise AssertionError("value not covered")


def rstat_n(tau, rho, delta):
    closed = 3 * math.log(2 / delta) / (2 * tau * tau * (rho - 2 * delta) ** 2)
    tau_p = tau * (rho - 2 * delta) / (rho + 1 - 2 * delta)
    chernoff = math.log(2 / delta) / (2 * tau_p ** 2)
    return math.ceil(max(closed, chernoff))


def majority_prob(p, flips):
    return sum(math.comb(flips, j) * p ** j * (1 - p) ** (flips - j) for j in range(flips + 1) if 2 * j > flips)


def approx_median_ok(pmf, x, tau):
    below = sum(pmf[: x + 1])
    above = sum(pmf[x:])
    return below >= 0.5 - tau - 1e-12 and above >= 0.5 - tau - 1e-12


def lcp_bits(x, y, d):
    a, b = format(x, f"0{d}b"), format(y, f"0{d}b")
    n = 0
    while n < d and a[n] == b[n]:
        n += 1
    return n


def iterated_log2(x):
    n = 0
    while x > 1:
        x = math.log2(x)
        n += 1
    return n


# frozen values (recomputed by the functions above; see test_oracles.py)
RSTAT_N_DEFAULT = 24530  # tau=0.1, rho=0.2, delta=0.01: bound is 24529.25
RSTAT_N_REUSE = 124180  # tau=0.1, rho=0.1, delta=0.01
BIN_1000_HALF_BELOW_400 = 9.008412706280358e-11
RADEMACHER_T1000_TAIL_AT_1P5_SQRT_T = 0.1371680052706525
HH_SIZES_ACCEPTANCE = (26, 12723840471)  # rho=0.1, v=0.45, eps=0.05
