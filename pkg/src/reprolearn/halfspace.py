"""Halfspace weak learners that round a signed vector sum onto a random lattice,
plus hypotheses, advantage estimates and a vector-sum concentration probe."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateRoundingError, InvalidParameterError
from .rounding import apply_rounding, construct_scheme


def _normalize_rows(X):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return X / np.where(norms == 0, 1.0, norms)


@dataclass(frozen=True)
class DirectionHypothesis:
    """h(x) = x/|x| . w/|w|.  Equality compares the lattice point exactly."""

    lattice: tuple

    @property
    def w(self):
        v = np.asarray(self.lattice, dtype=np.float64)
        return v / np.linalg.norm(v)

    def __call__(self, X):
        return _normalize_rows(X) @ self.w

    def fingerprint(self):
        return "dir:" + ",".join(repr(float(c)) for c in self.lattice)


@dataclass(frozen=True)
class VoteHypothesis:
    members: tuple

    def __post_init__(self):
        if not self.members:
            raise InvalidParameterError("vote needs at least one member")

    def score(self, X):
        if all(isinstance(h, DirectionHypothesis) for h in self.members):
            total = np.sum([h.w for h in self.members], axis=0)
            return _normalize_rows(X) @ total
        return np.sum([h(X) for h in self.members], axis=0)

    def __call__(self, X):
        return np.where(self.score(X) >= 0, 1.0, -1.0)

    def fingerprint(self):
        return "|".join(h.fingerprint() for h in self.members)


@dataclass(frozen=True)
class FunctionHypothesis:
    fn: Callable
    name: str = "fn"

    def __call__(self, X):
        return np.asarray(self.fn(X), dtype=np.float64)

    def fingerprint(self):
        return f"fn:{self.name}"


def direction(w):
    return DirectionHypothesis(tuple(float(c) for c in np.asarray(w, dtype=np.float64)))


def weighted_vector_sum(sample):
    X = sample.points
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0):
        raise InvalidParameterError("zero vector in sample")
    return ((X / norms[:, None]) * sample.labels[:, None]).sum(axis=0)


def advantage(h, source, n, s):
    smp = source.sample(n, s)
    return 0.5 * float(np.mean(smp.labels * h(smp.points)))


def exact_advantage(h, source):
    """Half the exact correlation on a finitely supported labeled source."""
    return 0.5 * source.expect(source.labels * h(source.points))


def expected_weighted_vector(source):
    return (source.probs[:, None] * _normalize_rows(source.points) * source.labels[:, None]).sum(axis=0)


DEFAULT_A = {"foam": 0.05, "box": 0.1}


@dataclass(frozen=True)
class WklParams:
    rho: float
    d: int
    tau: float
    scheme: str = "box"
    a: float = None
    m_override: int = None

    def __post_init__(self):
        if self.scheme not in DEFAULT_A:
            raise InvalidParameterError(f"unknown scheme {self.scheme!r}")
        if self.a is None:
            object.__setattr__(self, "a", DEFAULT_A[self.scheme])
        if not 0 < self.a < 0.5:
            raise InvalidParameterError("a must lie in (0, 1/2)")
        if not 0 < self.tau < 1 or not 0 < self.rho < 1 or self.d < 1:
            raise InvalidParameterError("need 0 < tau, rho < 1 and d >= 1")

    @property
    def bound_m(self):
        d, t, r, a = self.d, self.tau, self.rho, self.a
        base = 896 * math.sqrt(d) if self.scheme == "foam" else 64 * d ** 1.5
        return (base / (t * t * r)) ** (1 / (0.5 - a))

    @property
    def m(self):
        return int(self.m_override) if self.m_override else math.ceil(self.bound_m)

    @property
    def k(self):
        c = 8 if self.scheme == "foam" else 4
        return c * math.sqrt(self.d) / (self.tau ** 2 * self.m)

    def budget(self):
        """Paired-run disagreement bound from the analysis, at this m and k."""
        m, a, k = self.m, self.a, self.k
        tail = 2 * math.exp(-m ** (2 * a) / 2)
        if self.scheme == "foam":
            return tail + 56 * k * m ** (0.5 + a)
        return tail + 8 * self.d * k * m ** (0.5 + a)


def a_feasible(rho, a, scheme="foam"):
    """(896/rho)^(2a/(1/2-a)) >= 2 ln(4/rho), with 64 in place of 896 for boxes."""
    c = 896 if scheme == "foam" else 64
    return (c / rho) ** (2 * a / (0.5 - a)) >= 2 * math.log(4 / rho)


@dataclass(frozen=True)
class WklTrace:
    hypothesis: DirectionHypothesis
    z: np.ndarray
    rounded: np.ndarray
    k: float


def r_halfspace_wkl_trace(sample, p, s, strict=False):
    if strict and len(sample) < p.m:
        from .errors import InsufficientSampleError
        raise InsufficientSampleError(p.m, len(sample))
    if sample.dim != p.d:
        raise InvalidParameterError("sample dimension does not match params")
    z = weighted_vector_sum(sample[: p.m])
    scheme = construct_scheme(p.scheme, p.d, s.derive(f"{p.scheme}-scheme"))
    w = apply_rounding(scheme, p.k * z)
    if not np.any(w):
        raise DegenerateRoundingError("weight vector rounded to zero")
    return WklTrace(direction(w), z, w, p.k)


def r_halfspace_wkl(sample, p, s, strict=False):
    return r_halfspace_wkl_trace(sample, p, s, strict).hypothesis


@dataclass(frozen=True)
class ConcentrationResult:
    tail: float
    threshold: float
    bound: float
    trials: int
    exceed: int


def concentration_probe(source, T, delta, trials, s, c=2.0, threshold=None):
    """Tail of |sum of T centred draws| beyond sqrt(T)(1+c/2)+delta.

    ``threshold`` replaces the default threshold when given (the polynomial
    form uses 4 T^(1/2+a)).
    """
    if threshold is None:
        threshold = math.sqrt(T) * (1 + c / 2) + delta
    bound = math.exp(-delta ** 2 / (2 * c * c * T))
    mean = np.asarray(source.mean, dtype=np.float64)
    exceed, done, chunk = 0, 0, max(1, 200000 // max(1, T))
    while done < trials:
        b = min(chunk, trials - done)
        v = source.sample(b * T, s).reshape(b, T, -1) - mean
        norms = np.linalg.norm(v.sum(axis=1), axis=1)
        exceed += int(np.count_nonzero(norms >= threshold))
        done += b
    return ConcentrationResult(exceed / trials, threshold, bound, trials, exceed)
