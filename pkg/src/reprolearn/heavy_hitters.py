"""Reproducible approximate heavy hitters with a randomly drawn threshold."""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class HhParams:
    rho: float
    v: float
    eps: float

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise InvalidParameterError("rho must lie in (0, 1)")
        if not 0 < self.eps < 0.5:
            raise InvalidParameterError("eps must lie in (0, 1/2)")
        if not self.eps < self.v < 1 - self.eps:
            raise InvalidParameterError("need eps < v < 1 - eps")


def hh_sample_sizes(p):
    low = p.v - p.eps
    q1 = math.ceil(2 * math.log(6 / (p.rho * low)) / low)
    q2 = math.ceil(2 ** 6 * math.log(6 * q1 / p.rho) * q1 ** 2 / (p.rho * p.eps) ** 2)
    return q1, q2


def estimation_tolerance(p, q1):
    """Per-element accuracy the Q2 estimates are sized for."""
    return p.rho * p.eps / (3 * q1)


@dataclass(frozen=True)
class HhTrace:
    output: frozenset
    candidates: tuple
    estimates: dict
    v_prime: float
    q1: int
    q2: int


def _plain(x):
    return x.item() if isinstance(x, np.generic) else x


def heavy_hitters_from_counts(candidates, counts, total, p, s):
    """Filter step given candidate draws and counts over ``total`` fresh draws."""
    cands = tuple(sorted({_plain(c) for c in candidates}, key=repr))
    v_prime = s.uniform(p.v - p.eps, p.v + p.eps)
    est = {c: counts.get(c, 0) / total if total else 0.0 for c in cands}
    out = frozenset(c for c in cands if est[c] >= v_prime)
    return HhTrace(out, cands, est, v_prime, len(candidates), total)


def _as_list(xs):
    return xs.tolist() if isinstance(xs, np.ndarray) else list(xs)


def heavy_hitters_on_sample(sample, p, s, q1=None):
    """Run on a materialised sample: the first ``q1`` draws propose, the rest estimate."""
    if q1 is None:
        q1 = hh_sample_sizes(p)[0]
    items = _as_list(sample)
    if len(items) <= q1:
        raise InvalidParameterError("sample must hold more than q1 draws")
    counts = Counter(items[q1:])
    return heavy_hitters_from_counts(items[:q1], counts, len(items) - q1, p, s)


def r_heavy_hitters_trace(source, p, r, data, sizes=None):
    q1, q2 = sizes if sizes is not None else hh_sample_sizes(p)
    cands = _as_list(source.sample(q1, data.derive("candidates")))
    est_stream = data.derive("estimates")
    if hasattr(source, "sample_counts"):
        # exact multinomial counts: same law as counting q2 draws
        counts = source.sample_counts(q2, est_stream)
    else:
        counts = Counter(_as_list(source.sample(q2, est_stream)))
    return heavy_hitters_from_counts(cands, counts, q2, p, r)


def r_heavy_hitters(source, p, r, data, sizes=None):
    """Heavy hitters of ``source``; ``r`` is the shared randomness, ``data`` draws examples."""
    return r_heavy_hitters_trace(source, p, r, data, sizes).output


def hh_events(trace, pmf, p):
    """Which of the three success events held, judged against the exact pmf."""
    tol = estimation_tolerance(p, trace.q1)
    heavy = {x for x, px in pmf.items() if px >= p.v - p.eps}
    coverage = heavy <= set(trace.candidates)
    accurate = all(abs(trace.estimates[c] - pmf.get(c, 0.0)) <= tol for c in trace.candidates)
    clear = all(abs(trace.v_prime - pmf.get(c, 0.0)) > tol for c in trace.candidates)
    exact = trace.output == frozenset(x for x, px in pmf.items() if px >= trace.v_prime)
    return {"coverage": coverage, "accuracy": accurate, "threshold_clear": clear, "exact": exact}
