"""Sample median and the recursive reproducible approximate median over d-bit
integers.

Each level replaces the sample by medians of small batches, learns a prefix
length from the lengths of common prefixes between pairs of medians (by
recursing on a domain of ceil(log2 d) bits), finds a heavy prefix of that
length, and pads it with zeros or ones.

Levels and the prefix-length encoding
-------------------------------------
A pair of d-bit medians shares a prefix of length 0..d, which is d+1 values.
We recurse on ``max(lcp, 1) - 1`` in [0, d-1] and use ``ell = answer + 1``.
That fits in ceil(log2 d) bits and never selects the empty prefix, which
always has mass 1 and so can never pass the [1/3, 2/3] window.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AlgorithmFailure, InsufficientSampleError, InvalidParameterError
from .heavy_hitters import HhParams, hh_sample_sizes, heavy_hitters_on_sample
from .sq import SqParams, SqQuery, rstat, rstat_sample_size

HH_V = 5 / 12
HH_EPS = 1 / 12


def log_star(x):
    n = 0
    while x > 1:
        x = math.log2(x)
        n += 1
    return n


def simple_median(sample):
    a = np.asarray(sample)
    if a.size == 0:
        raise InvalidParameterError("empty sample")
    k = (len(a) + 1) // 2 - 1  # ceil(n/2)-th order statistic, 0-based
    return np.partition(a, k)[k].item()


def batch_medians(sample, n_m):
    a = np.asarray(sample)[: (len(sample) // n_m) * n_m].reshape(-1, n_m)
    k = (n_m + 1) // 2 - 1
    return np.partition(a, k, axis=1)[:, k]


def simple_median_size(tau, delta):
    return math.ceil(3 * (0.5 - tau) * math.log(2 / delta) / tau ** 2)


def longest_common_prefix(x, y, d):
    if isinstance(x, str) or isinstance(y, str):
        if len(x) != len(y):
            raise InvalidParameterError("length mismatch")
        n = 0
        while n < len(x) and x[n] == y[n]:
            n += 1
        return n
    x, y = int(x), int(y)
    if x >> d or y >> d or x < 0 or y < 0:
        raise InvalidParameterError(f"values must be {d}-bit")
    diff = x ^ y
    return d if diff == 0 else d - diff.bit_length()


def lcp_many(xs, ys, d):
    diff = np.bitwise_xor(np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64))
    # bit_length via frexp: exact for values below 2**53
    _, exp = np.frexp(diff.astype(np.float64))
    return np.where(diff == 0, d, d - exp)


def is_approx_median(pmf, x, tau):
    """Pr[X <= x] >= 1/2 - tau and Pr[X >= x] >= 1/2 - tau."""
    pmf = np.asarray(pmf, dtype=np.float64)
    below = pmf[: x + 1].sum()
    above = pmf[x:].sum()
    return bool(below >= 0.5 - tau - 1e-12 and above >= 0.5 - tau - 1e-12)


def cdf_position_ok(pmf, x, tau):
    """Pr[X <= x] within [1/2 - tau, 1/2 + tau]."""
    c = float(np.asarray(pmf, dtype=np.float64)[: x + 1].sum())
    return 0.5 - tau - 1e-12 <= c <= 0.5 + tau + 1e-12


@dataclass(frozen=True)
class MedianParams:
    rho: float
    d: int
    tau: float
    delta: float = 1 / 3
    c_scale: float = 1.0
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1:
            raise InvalidParameterError("d must be at least 1")
        if not 0 < self.tau < 0.5:
            raise InvalidParameterError("tau must lie in (0, 1/2)")
        if not 0 < self.rho < 1 or not 0 < self.delta < 1:
            raise InvalidParameterError("rho and delta must lie in (0, 1)")
        if self.c_scale <= 0:
            raise InvalidParameterError("c_scale must be positive")
        bad = set(self.overrides) - {"n_m", "n_sq", "n_sq_base", "q1", "q2"}
        if bad:
            raise InvalidParameterError(f"unknown overrides {sorted(bad)}")

    @property
    def log_star(self):
        return max(1, log_star(2 ** self.d))

    @property
    def rho0(self):
        return self.rho / (6 * self.log_star)

    @property
    def delta_sq(self):
        # rSTAT's failure share; keeps rho0 - 2*delta_sq = rho0/2
        return self.rho0 / 4

    @property
    def desk(self):
        return self.c_scale != 1.0 or bool(self.overrides)

    def _size(self, key, exact):
        if key in self.overrides:
            return int(self.overrides[key])
        return max(1, math.ceil(self.c_scale * exact))

    def sq_params(self, tau):
        return SqParams(tau, self.rho0, self.delta_sq)

    def hh_params(self):
        return HhParams(self.rho0, HH_V, HH_EPS)


@dataclass(frozen=True)
class LevelPlan:
    d: int
    n_total: int
    n_m: int = 0
    n_sq: int = 0
    q1: int = 0
    q2: int = 0
    n_child: int = 0
    n_meds: int = 0
    delta0: float = 0.0


def median_plan(p, d=None):
    """Sample sizes for every level, keyed by bit width."""
    d = p.d if d is None else d
    if d == 1:
        n = p._size("n_sq_base", rstat_sample_size(p.sq_params(p.tau / 2)))
        return {1: LevelPlan(1, n)}
    child_d = math.ceil(math.log2(d))
    plans = median_plan(p, child_d)
    n_child = plans[child_d].n_total
    n_sq = p._size("n_sq", rstat_sample_size(p.sq_params(p.tau)))
    e1, e2 = hh_sample_sizes(p.hh_params())
    q1 = p._size("q1", e1)
    q2 = p._size("q2", e2)
    n_meds = 2 * n_child + q1 + q2 + 4 * n_sq
    delta0 = p.delta / (4 * n_meds * p.log_star)
    n_m = p._size("n_m", simple_median_size(p.tau, delta0))
    plans[d] = LevelPlan(d, n_m * n_meds, n_m, n_sq, q1, q2, n_child, n_meds, delta0)
    return plans


def median_sample_size(p):
    return median_plan(p)[p.d].n_total


@dataclass
class LevelRecord:
    d: int
    output: int
    ell: int = None
    candidates: tuple = ()
    masses: tuple = ()
    prefix: int = None
    s0: int = None
    s1: int = None
    p_s0: float = None
    fallback: bool = False


@dataclass
class MedianResult:
    output: int
    levels: list

    @property
    def depth(self):
        return len(self.levels)

    def fingerprint(self):
        return tuple((r.d, r.ell, r.candidates, r.prefix, r.output) for r in self.levels)


def _level(sample, d, p, plans, s, records):
    plan = plans[d]
    if len(sample) < plan.n_total:
        raise InsufficientSampleError(plan.n_total, len(sample), f"level-{d} sample")
    strict = not p.desk
    if d == 1:
        is_zero = SqQuery(lambda x: (np.asarray(x) == 0).astype(np.float64), "x==0")
        p0 = rstat(is_zero, sample[: plan.n_total], p.sq_params(p.tau / 2), s.derive("base"), strict)
        out = 0 if p0 >= 0.5 - p.tau / 2 else 1
        records.append(LevelRecord(1, out, masses=(p0,)))
        return out

    meds = batch_medians(sample[: plan.n_total], plan.n_m)
    pos = 0
    pairs = meds[pos: pos + 2 * plan.n_child].reshape(-1, 2)
    pos += 2 * plan.n_child
    code = np.maximum(lcp_many(pairs[:, 0], pairs[:, 1], d), 1) - 1
    child_d = math.ceil(math.log2(d))
    ell = min(_level(code, child_d, p, plans, s.derive("recurse"), records) + 1, d)

    shift = d - ell
    hh = meds[pos: pos + plan.q1 + plan.q2] >> shift
    pos += plan.q1 + plan.q2
    V = sorted(heavy_hitters_on_sample(hh, p.hh_params(), s.derive("heavy"), plan.q1).output)

    sqp = p.sq_params(p.tau)
    masses, chosen, heavy = [], None, None
    for i, v in enumerate(V[:3]):
        # candidate i always reads chunk i, whatever |V| is
        chunk = meds[pos + i * plan.n_sq: pos + (i + 1) * plan.n_sq]
        q = SqQuery(lambda x, v=v: ((np.asarray(x) >> shift) == v).astype(np.float64), f"prefix=={v}")
        pv = rstat(q, chunk, sqp, s.derive(f"cand{i}"), strict)
        masses.append(pv)
        if 1 / 3 <= pv <= 2 / 3:
            chosen = v
        if pv >= 1 / 3:
            heavy = v
    fallback = chosen is None
    if fallback:
        # concentrated medians: every heavy prefix weighs more than 2/3
        if heavy is None:
            raise AlgorithmFailure(f"no heavy prefix at level {d} (ell={ell})")
        chosen = heavy
    s0 = chosen << shift
    s1 = s0 | ((1 << shift) - 1)
    chunk = meds[pos + 3 * plan.n_sq: pos + 4 * plan.n_sq]
    below = SqQuery(lambda x: (np.asarray(x) <= s0).astype(np.float64), f"x<={s0}")
    ps0 = rstat(below, chunk, sqp, s.derive("final"), strict)
    out = s0 if ps0 >= 1 / 6 - 2 * p.tau else s1
    records.append(LevelRecord(d, out, ell, tuple(V), tuple(masses), chosen, s0, s1, ps0, fallback))
    return out


def r_median_trace(sample, p, s):
    plans = median_plan(p)
    records = []
    out = _level(np.asarray(sample, dtype=np.int64), p.d, p, plans, s.derive(f"median-d{p.d}"), records)
    return MedianResult(int(out), records)


def r_median(sample, p, s):
    return r_median_trace(sample, p, s).output
