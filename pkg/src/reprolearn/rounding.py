"""Randomized rounding: offset intervals on [0,1], shifted boxes and foams on R^d."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import FoamBudgetError, InvalidParameterError


@dataclass(frozen=True)
class IntervalPartition:
    """Regions [0,off), [off+i*alpha, off+(i+1)*alpha), ..., tail up to 1."""

    alpha: float
    alpha_off: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidParameterError("alpha must lie in (0, 1]")
        if not 0 <= self.alpha_off <= self.alpha:
            raise InvalidParameterError("alpha_off must lie in [0, alpha]")

    def region(self, v):
        a, off = self.alpha, self.alpha_off
        if v < off:
            return 0.0, off
        i = math.floor((v - off) / a)
        # settle float noise against the boundaries as they are defined
        if v >= off + (i + 1) * a:
            i += 1
        elif v < off + i * a:
            i -= 1
        lo = off + i * a
        if lo >= 1.0:
            # v == 1 sits in the closed tail
            if i == 0:
                return 0.0, off
            lo = off + (i - 1) * a
        return lo, min(lo + a, 1.0)

    def boundaries(self):
        out = [self.alpha_off] if self.alpha_off > 0 else []
        i = 1
        while self.alpha_off + i * self.alpha < 1.0:
            out.append(self.alpha_off + i * self.alpha)
            i += 1
        return out


def round_interval(v, P):
    if v < 0.0 or v > 1.0:
        warnings.warn(f"value {v!r} outside [0, 1] clamped", RuntimeWarning, stacklevel=2)
        v = min(max(v, 0.0), 1.0)
    lo, hi = P.region(v)
    return (lo + hi) / 2.0


def round_interval_many(values, P):
    """Vectorised ``round_interval`` for already-clamped values."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    a, off = P.alpha, P.alpha_off
    i = np.floor((v - off) / a)
    i = np.where(v >= off + (i + 1) * a, i + 1, i)
    i = np.where(v < off + i * a, i - 1, i)
    lo = off + i * a
    lo = np.where((lo >= 1.0) & (i > 0), off + (i - 1) * a, lo)
    hi = np.minimum(lo + a, 1.0)
    first = (v < off) | ((lo >= 1.0) & (i == 0))
    lo = np.where(first, 0.0, lo)
    hi = np.where(first, off, hi)
    return (lo + hi) / 2.0


class BoxScheme:
    """Unit boxes [-1/2, 1/2)^d + Z + n, each mapped to its centre Z + n."""

    kind = "box"

    def __init__(self, d, Z):
        self.d = d
        self.Z = np.asarray(Z, dtype=np.float64)

    def __repr__(self):
        return f"BoxScheme(d={self.d}, Z={self.Z.tolist()})"

    def max_distance(self):
        return math.sqrt(self.d) / 2.0

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        return self.Z + np.floor(x - self.Z + 0.5)


def _bump(u):
    return np.prod(2.0 * np.sin(np.pi * u) ** 2, axis=-1)


class FoamScheme:
    """Lazily constructed foam tessellation of R^d by integer lattice points.

    Stage t draws a shift Z_t in [0,1)^d and a height H_t in (0, 2^d).  A point
    y not yet captured joins stage t when f(frac(y + Z_t)) > H_t and is mapped
    to floor(y + Z_t).  Stages are memoised, so repeated queries agree.
    """

    kind = "foam"
    _BLOCK = 32

    def __init__(self, d, s, max_stages=10**6):
        self.d = d
        self.max_stages = int(max_stages)
        self._stream = s.derive("foam-stages")
        self._Z = np.zeros((0, d))
        self._H = np.zeros(0)

    def __repr__(self):
        return f"FoamScheme(d={self.d}, stages={self.stages})"

    @property
    def stages(self):
        return len(self._H)

    def max_distance(self):
        return math.sqrt(self.d)

    def stage(self, t):
        self._ensure(t + 1)
        return self._Z[t].copy(), float(self._H[t])

    def _ensure(self, count):
        count = min(count, self.max_stages)
        have = len(self._H)
        if count <= have:
            return
        k = count - have
        # stage t occupies words [t(d+1), (t+1)(d+1)) of the stage stream
        self._stream.counter = have * (self.d + 1)
        raw = self._stream.uniforms(k * (self.d + 1)).reshape(k, self.d + 1)
        Z = raw[:, : self.d]
        # (0, 2^d): map the half-open draw onto the open interval
        H = (1.0 - raw[:, self.d]) * float(2 ** self.d)
        self._Z = np.vstack([self._Z, Z])
        self._H = np.concatenate([self._H, H])

    def assign(self, x):
        """Return (lattice points, capturing stage index) for each row of x."""
        X = np.atleast_2d(np.asarray(x, dtype=np.float64))
        n = len(X)
        out = np.empty_like(X)
        which = np.full(n, -1, dtype=np.int64)
        todo = np.arange(n)
        t = 0
        while len(todo):
            if t >= self.max_stages:
                raise FoamBudgetError(
                    f"{len(todo)} point(s) unassigned after {self.max_stages} stages")
            hi = min(t + self._BLOCK, self.max_stages)
            self._ensure(hi)
            Z, H = self._Z[t:hi], self._H[t:hi]
            shifted = X[todo][:, None, :] + Z[None, :, :]
            cell = np.floor(shifted)
            hit = _bump(shifted - cell) > H[None, :]
            got = hit.any(axis=1)
            first = np.argmax(hit, axis=1)
            rows = todo[got]
            out[rows] = cell[got, first[got]]
            which[rows] = t + first[got]
            todo = todo[~got]
            t = hi
        return out, which

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        pts, _ = self.assign(x)
        return pts[0] if x.ndim == 1 else pts


def construct_boxes(d, s):
    if d < 1:
        raise InvalidParameterError("d must be at least 1")
    return BoxScheme(d, s.uniforms(d))


def construct_foams(d, s, max_stages=10**6):
    if d < 1:
        raise InvalidParameterError("d must be at least 1")
    return FoamScheme(d, s, max_stages)


def construct_scheme(kind, d, s, **kw):
    if kind == "box":
        return construct_boxes(d, s)
    if kind == "foam":
        return construct_foams(d, s, **kw)
    raise InvalidParameterError(f"unknown scheme {kind!r}")


def apply_rounding(scheme, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != scheme.d:
        raise InvalidParameterError(f"dimension {x.shape[-1]} != scheme dimension {scheme.d}")
    return scheme.apply(x)
