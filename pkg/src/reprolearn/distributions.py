"""Sampling sources: biased coins, discrete pmfs over d-bit strings,
labeled margin halfspaces, and small vector sources for concentration probes.

All sampling is a pure function of ``(source, n, stream state)``.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class LabeledSample:
    points: np.ndarray  # (n, d) float
    labels: np.ndarray  # (n,) in {-1, +1}

    def __post_init__(self):
        if self.points.ndim != 2 or len(self.points) != len(self.labels):
            raise InvalidParameterError("points must be (n, d) with one label each")

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, idx):
        return LabeledSample(self.points[idx], self.labels[idx])

    @property
    def dim(self):
        return self.points.shape[1]

    @staticmethod
    def concat(parts):
        parts = list(parts)
        return LabeledSample(np.concatenate([p.points for p in parts]),
                             np.concatenate([p.labels for p in parts]))


@dataclass(frozen=True)
class CoinSource:
    p: float
    kind = "coin"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameterError("coin bias must lie in [0, 1]")

    def sample(self, n, s):
        return (s.uniforms(n) < self.p).astype(np.int8)

    def sample_counts(self, n, s):
        k = int(s.generator().binomial(n, self.p))
        return {0: n - k, 1: k}

    def exact_pmf(self):
        return {0: 1.0 - self.p, 1: self.p}


@dataclass(frozen=True, eq=False)
class DiscreteSource:
    """pmf over the integers ``0 .. 2**bits - 1`` read as d-bit strings."""

    bits: int
    pmf: np.ndarray
    kind = "discrete"
    _cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=np.float64)
        if pmf.shape != (1 << self.bits,):
            raise InvalidParameterError(f"pmf must have 2**{self.bits} entries")
        if np.any(pmf < 0) or abs(pmf.sum() - 1.0) > 1e-12:
            raise InvalidParameterError("pmf must be non-negative and sum to 1")
        object.__setattr__(self, "pmf", pmf)
        cdf = np.cumsum(pmf)
        cdf[-1] = 1.0
        object.__setattr__(self, "_cdf", cdf)

    def sample(self, n, s):
        return np.searchsorted(self._cdf, s.uniforms(n), side="right").astype(np.int64)

    def sample_counts(self, n, s):
        counts = s.generator().multinomial(n, self.pmf)
        return {int(i): int(c) for i, c in enumerate(counts) if c}

    def exact_pmf(self):
        return {i: float(p) for i, p in enumerate(self.pmf)}

    def cdf(self):
        return self._cdf.copy()


def point_mass(bits, x0):
    pmf = np.zeros(1 << bits)
    pmf[x0] = 1.0
    return DiscreteSource(bits, pmf)


def uniform_discrete(bits):
    return DiscreteSource(bits, np.full(1 << bits, 1.0 / (1 << bits)))


def from_mapping(bits, mapping):
    pmf = np.zeros(1 << bits)
    for k, v in mapping.items():
        pmf[int(k)] = v
    return DiscreteSource(bits, pmf)


def load_pmf_csv(path, bits=None):
    """Read a two-column ``index,probability`` CSV (header optional)."""
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            try:
                rows.append((int(rec[0]), float(rec[1])))
            except ValueError:
                continue  # header
    if not rows:
        raise InvalidParameterError(f"no pmf rows in {path}")
    top = max(i for i, _ in rows)
    if bits is None:
        bits = max(1, int(top).bit_length())
    return from_mapping(bits, dict(rows))


def _unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


@dataclass(frozen=True, eq=False)
class MarginHalfspaceSource:
    """Unit vectors on the sphere with |x.w| >= tau, labeled sign(x.w)."""

    d: int
    w: np.ndarray
    tau: float
    kind = "margin_halfspace"

    def sample(self, n, s):
        g = s.generator()
        pts, got = [], 0
        while got < n:
            batch = max(64, int(1.3 * (n - got) / self._accept_guess()) + 16)
            x = g.standard_normal((batch, self.d))
            x /= np.linalg.norm(x, axis=1, keepdims=True)
            proj = x @ self.w
            x = x[np.abs(proj) >= self.tau]
            pts.append(x)
            got += len(x)
        x = np.concatenate(pts)[:n] if pts else np.zeros((0, self.d))
        y = np.where(x @ self.w >= 0, 1, -1).astype(np.int8)
        return LabeledSample(x, y)

    def _accept_guess(self):
        # crude, only sizes the batches
        return max(1e-3, 1.0 - self.tau) if self.d > 1 else 1.0

    def exact_pmf(self):
        return None


def make_margin_halfspace(d, tau, s):
    if d < 1:
        raise InvalidParameterError("d must be at least 1")
    if not 0 < tau < 1:
        raise InvalidParameterError("margin must lie in (0, 1)")
    w = _unit(s.generator().standard_normal(d))
    return MarginHalfspaceSource(d, w, float(tau))


@dataclass(frozen=True, eq=False)
class FiniteLabeledSource:
    """Finitely supported labeled distribution; every expectation is exact."""

    points: np.ndarray
    labels: np.ndarray
    probs: np.ndarray
    w: np.ndarray = None
    tau: float = None
    kind = "finite_labeled"

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if abs(probs.sum() - 1.0) > 1e-12 or np.any(probs < 0):
            raise InvalidParameterError("probs must be non-negative and sum to 1")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "points", np.asarray(self.points, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int8))

    @property
    def d(self):
        return self.points.shape[1]

    def sample_indices(self, n, s):
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        return np.searchsorted(cdf, s.uniforms(n), side="right")

    def sample(self, n, s):
        idx = self.sample_indices(n, s)
        return LabeledSample(self.points[idx], self.labels[idx])

    def exact_pmf(self):
        return {i: float(p) for i, p in enumerate(self.probs)}

    def expect(self, values):
        return float(np.dot(self.probs, values))


def make_finite_margin_source(d, tau, k, s):
    """``k`` equally likely support points drawn from a margin-``tau`` source."""
    src = make_margin_halfspace(d, tau, s.derive("direction"))
    pts = src.sample(k, s.derive("support"))
    return FiniteLabeledSource(pts.points, pts.labels, np.full(k, 1.0 / k), src.w, tau)


@dataclass(frozen=True)
class SignVectorSource:
    """Uniform on {-1,+1}^d / sqrt(d): unit norm, mean zero."""

    d: int
    kind = "sign_vectors"

    @property
    def mean(self):
        return np.zeros(self.d)

    def sample(self, n, s):
        bits = (s.words(n * self.d) & np.uint64(1)).astype(np.float64)
        return (2.0 * bits - 1.0).reshape(n, self.d) / np.sqrt(self.d)


@dataclass(frozen=True, eq=False)
class PointVectorSource:
    v: np.ndarray
    kind = "point_vector"

    @property
    def d(self):
        return len(self.v)

    @property
    def mean(self):
        return np.asarray(self.v, dtype=np.float64)

    def sample(self, n, s):
        return np.tile(np.asarray(self.v, dtype=np.float64), (n, 1))


def sample(source, n, s):
    if n < 0:
        raise InvalidParameterError("n must be non-negative")
    return source.sample(int(n), s)


def exact_pmf(source):
    fn = getattr(source, "exact_pmf", None)
    return fn() if fn is not None else None
