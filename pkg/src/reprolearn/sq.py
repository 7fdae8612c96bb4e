"""Reproducible statistical queries (rSTAT) and the coin decision built on them."""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InsufficientSampleError, InvalidParameterError
from .rounding import IntervalPartition, round_interval


@dataclass(frozen=True)
class SqQuery:
    phi: Callable  # vectorised: array of examples -> array in [0, 1]
    name: str = "phi"

    def mean(self, sample):
        vals = np.asarray(self.phi(sample), dtype=np.float64)
        return float(vals.mean()) if vals.size else 0.0


IDENTITY = SqQuery(lambda x: np.asarray(x, dtype=np.float64), "identity")


@dataclass(frozen=True)
class SqParams:
    tau: float
    rho: float
    delta: float

    def __post_init__(self):
        for name in ("tau", "rho", "delta"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise InvalidParameterError(f"{name} must lie in (0, 1), got {v}")
        if self.rho <= 2 * self.delta:
            raise InvalidParameterError("need rho > 2*delta")

    @property
    def alpha(self):
        return 2 * self.tau / (self.rho + 1 - 2 * self.delta)

    @property
    def tau_prime(self):
        """Allowed sampling error; tau' + alpha/2 = tau."""
        return self.tau * (self.rho - 2 * self.delta) / (self.rho + 1 - 2 * self.delta)


def rstat_sample_size(p):
    gap = p.rho - 2 * p.delta
    if gap <= 0:
        raise InvalidParameterError("need rho > 2*delta")
    closed = 3 * math.log(2 / p.delta) / (2 * p.tau ** 2 * gap ** 2)
    # the closed form covers the Chernoff size only while rho - 2*delta <= sqrt(3) - 1
    chernoff = math.log(2 / p.delta) / (2 * p.tau_prime ** 2)
    return math.ceil(max(closed, chernoff))


def effective_rho(p, n):
    """Reproducibility the rounding actually guarantees with n samples.

    Inverts the sample-size bound: two empirical means land within 2*t of each
    other except w.p. 2*delta, where t solves n = ln(2/delta)/(2 t^2).
    """
    t = math.sqrt(math.log(2 / p.delta) / (2 * n))
    return min(1.0, 2 * t / p.alpha + 2 * p.delta)


@dataclass(frozen=True)
class RstatTrace:
    output: float
    empirical: float
    alpha: float
    alpha_off: float

    @property
    def rounding_shift(self):
        return abs(self.output - min(max(self.empirical, 0.0), 1.0))


def rstat_trace(q, sample, p, s, strict=True):
    """rSTAT with its intermediate values exposed.

    ``strict=False`` skips the sample-size guard; used by experiments that
    deliberately run below the guaranteed size.
    """
    n = len(sample)
    if strict:
        need = rstat_sample_size(p)
        if n < need:
            raise InsufficientSampleError(need, n)
    elif n == 0:
        raise InsufficientSampleError(1, 0)
    alpha = p.alpha
    alpha_off = s.uniform(0.0, alpha)
    v = q.mean(sample)
    # the mean of a [0,1] query leaves the range only through float error
    v = min(max(v, 0.0), 1.0)
    out = round_interval(v, IntervalPartition(alpha, alpha_off))
    return RstatTrace(out, v, alpha, alpha_off)


def rstat(q, sample, p, s, strict=True):
    return rstat_trace(q, sample, p, s, strict).output


def solve_coin(sample, tau, rho, s, delta=None, strict=True):
    """+1 if the coin looks biased towards 1, else -1.

    The rSTAT failure share defaults to rho/4 when ``delta`` is not given.
    """
    if delta is None:
        delta = rho / 4
    v = rstat(IDENTITY, sample, SqParams(tau, rho, delta), s, strict)
    return 1 if v >= 0.5 else -1
