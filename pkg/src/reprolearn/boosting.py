"""Smooth reproducible boosting with a rejection sampler.

Each round rejection-samples the weak learner's input from the current
reweighted distribution, adds the returned hypothesis to the score, and asks a
reproducible statistical query whether the measure's density has dropped low
enough to stop.  Every round derives its own labelled streams, so the variable
amount of randomness the sampler consumes never shifts later rounds.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .distributions import LabeledSample
from .errors import (BOTTOM, InsufficientSampleError, InvalidParameterError,
                     NonTerminationError, RoundFailure)
from .halfspace import DirectionHypothesis, VoteHypothesis, WklParams, r_halfspace_wkl
from .sq import SqParams, SqQuery, rstat, rstat_sample_size


def measure_eval(gamma, a):
    a = np.asarray(a, dtype=np.float64)
    out = np.where(a <= 0, 1.0, (1.0 - gamma) ** (np.maximum(a, 0.0) / 2))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Measure:
    """mu(x) = M(sum_i h_i(x) f(x) - t*theta) for the hypotheses seen so far."""

    gamma: float
    hypotheses: tuple = ()

    @property
    def theta(self):
        return self.gamma / (2 + self.gamma)

    def score(self, X, y):
        if not self.hypotheses:
            return np.zeros(len(y))
        s = VoteHypothesis(self.hypotheses).score(X)
        return np.asarray(y, dtype=np.float64) * s - len(self.hypotheses) * self.theta

    def __call__(self, X, y):
        return measure_eval(self.gamma, self.score(X, y))

    def extend(self, h):
        return Measure(self.gamma, self.hypotheses + (h,))


def rejection_sampler(s_all, m_target, mu, s):
    """Keep example i iff mu(x_i) >= b_i; b_i is the stream's i-th draw.

    ``mu`` is a callable on (points, labels) or a constant.
    """
    if m_target > len(s_all):
        raise InvalidParameterError("m_target exceeds the pool")
    b = s.uniforms(len(s_all))
    vals = mu(s_all.points, s_all.labels) if callable(mu) else np.full(len(s_all), float(mu))
    kept = np.flatnonzero(vals >= b)
    if len(kept) < m_target:
        return BOTTOM
    return s_all[kept[:m_target]]


def rejection_pool_size(m_target, eps, delta):
    return math.ceil(24 * m_target * math.log(1 / delta) / eps)


@dataclass(frozen=True)
class WeakLearner:
    fit: Callable  # (LabeledSample, RandomStream) -> hypothesis
    m: int
    name: str = "weak"


def rounding_weak_learner(p):
    return WeakLearner(lambda smp, s: r_halfspace_wkl(smp, p, s), p.m, f"{p.scheme}-wkl")


@dataclass(frozen=True)
class BoostParams:
    rho: float
    eps: float
    gamma: float
    c_T: float = 4.0
    n_pool: int = None  # desk-scale override of the per-round rejection pool
    n_stat: int = None  # desk-scale override of the termination-query sample

    def __post_init__(self):
        if not 0 < self.rho < 1 or not 0 < self.eps < 1:
            raise InvalidParameterError("rho and eps must lie in (0, 1)")
        if not 0 < self.gamma < 1:
            raise InvalidParameterError("gamma must lie in (0, 1)")

    @property
    def theta(self):
        return self.gamma / (2 + self.gamma)

    @property
    def T_max(self):
        return math.ceil(self.c_T / (self.eps * self.gamma ** 2))

    @property
    def sq(self):
        rho0 = self.rho / (3 * self.T_max)
        return SqParams(self.eps / 3, rho0, rho0 / 4)

    @property
    def bottom_delta(self):
        return self.rho / (6 * self.T_max)

    @property
    def desk(self):
        return self.n_pool is not None or self.n_stat is not None

    def pool_size(self, m_wkl):
        if self.n_pool is not None:
            return int(self.n_pool)
        return rejection_pool_size(m_wkl, self.eps, self.bottom_delta)

    def stat_size(self):
        return int(self.n_stat) if self.n_stat is not None else rstat_sample_size(self.sq)


class ArrayFeed:
    """Carves consecutive fresh slices off a fixed sample."""

    def __init__(self, sample):
        self.sample = sample
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.sample):
            raise InsufficientSampleError(self.pos + n, len(self.sample))
        out = self.sample[self.pos: self.pos + n]
        self.pos += n
        return out


class SourceFeed:
    """Draws fresh examples from a source on demand (same law as a long sample)."""

    def __init__(self, source, s):
        self.source = source
        self.s = s
        self.calls = 0
        self.drawn = 0

    def take(self, n):
        self.calls += 1
        self.drawn += n
        return self.source.sample(n, self.s.derive(f"take{self.calls}"))


@dataclass
class RoundRecord:
    t: int
    hypothesis: object
    density_estimate: float
    pool: int
    retried: bool


@dataclass
class BoostResult:
    hypothesis: VoteHypothesis
    rounds: list = field(default_factory=list)
    gamma: float = 0.0

    def sequence(self):
        return tuple(r.hypothesis for r in self.rounds)

    def measure(self, t):
        """The measure after the first t rounds."""
        return Measure(self.gamma, self.sequence()[:t])

    def fingerprint(self):
        return self.hypothesis.fingerprint()


def r_boost_trace(data, weak, p, s):
    feed = data if hasattr(data, "take") else ArrayFeed(data)
    strict = not p.desk
    pool = p.pool_size(weak.m)
    n_stat = p.stat_size()
    mu = Measure(p.gamma)
    rounds = []
    t = 0
    while True:
        t += 1
        if t > p.T_max:
            raise NonTerminationError(f"no exit within {p.T_max} rounds")
        rs = s.derive(f"round{t}")
        kept = rejection_sampler(feed.take(pool), weak.m, mu, rs.derive("sampler"))
        retried = kept is BOTTOM
        if retried:
            kept = rejection_sampler(feed.take(2 * pool), weak.m, mu, rs.derive("sampler-retry"))
            if kept is BOTTOM:
                raise RoundFailure(f"rejection sampler exhausted in round {t}")
        h = weak.fit(kept, rs.derive("weak"))
        mu = mu.extend(h)
        s2 = feed.take(n_stat)
        q = SqQuery(lambda smp, mu=mu: mu(smp.points, smp.labels), "measure")
        est = rstat(q, s2, p.sq, rs.derive("stop"), strict)
        rounds.append(RoundRecord(t, h, est, pool, retried))
        if est <= 2 * p.eps / 3:
            break
    return BoostResult(VoteHypothesis(mu.hypotheses), rounds, p.gamma)


def r_boost(data, weak, p, s):
    return r_boost_trace(data, weak, p, s).hypothesis


def strong_learner_complexity(d, tau, rho, eps, scheme="box", c_T=4.0):
    """Closed-form sample complexity next to the composed count at full constants."""
    if scheme == "foam":
        closed = d ** (10 / 9) / (tau ** (76 / 9) * rho ** (20 / 9) * eps ** (28 / 9))
    else:
        closed = d ** (15 / 4) / (tau ** 10 * rho ** 2.5 * eps ** 4.5)
    bp = BoostParams(rho, eps, tau / 4, c_T)
    T = bp.T_max
    wp = WklParams(rho / (3 * T), d, tau, scheme)
    per_round = bp.pool_size(wp.m) + bp.stat_size()
    return {"closed_form": closed, "T_max": T, "m_wkl": wp.m,
            "per_round": per_round, "composed": T * per_round}


def strong_halfspace_learner(source, d, tau, rho, eps, scheme, s, data,
                             m_override=None, n_pool=None, n_stat=None, c_T=4.0):
    """Boosting over the lattice-rounding weak learner at gamma = tau/4.

    ``data`` is the stream examples are drawn from; ``s`` is the shared randomness.
    """
    bp = BoostParams(rho, eps, tau / 4, c_T, n_pool, n_stat)
    wp = WklParams(rho / (3 * bp.T_max), d, tau, scheme, m_override=m_override)
    res = r_boost_trace(SourceFeed(source, data), rounding_weak_learner(wp), bp, s)
    return res
