"""Shared randomness as labeled, counter-based streams.

A stream is identified by ``(root_seed, label_path)``.  Its output words are
produced by a Philox block cipher keyed with a BLAKE2b hash of that identity,
so word ``i`` of a stream can be computed without generating words ``0..i-1``.
Deriving a child appends a label; siblings never share bits.

Every uniform draw consumes exactly one 64-bit word (the top 53 bits are used
for the double).  ``generator()`` consumes one word and returns an independent
numpy ``Generator`` for bulk non-uniform draws (normals, multinomials).
"""

import hashlib
import struct

import numpy as np

from .errors import InvalidParameterError

_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0 ** -53


def _key(root_seed, label_path):
    h = hashlib.blake2b(digest_size=16)
    h.update(struct.pack("<Q", root_seed & _MASK64))
    for label in label_path:
        raw = label.encode("utf-8")
        # length prefix keeps ("x","y") distinct from ("xy",)
        h.update(struct.pack("<I", len(raw)))
        h.update(raw)
    return int.from_bytes(h.digest(), "little")


class RandomStream:
    """Deterministic stream of 64-bit words addressed by a counter."""

    __slots__ = ("root_seed", "label_path", "counter", "_key")

    def __init__(self, root_seed, label_path=(), counter=0):
        if counter < 0:
            raise InvalidParameterError("counter must be non-negative")
        self.root_seed = int(root_seed) & _MASK64
        self.label_path = tuple(str(x) for x in label_path)
        self.counter = int(counter)
        self._key = _key(self.root_seed, self.label_path)

    def __repr__(self):
        path = "/".join(self.label_path)
        return f"RandomStream(seed={self.root_seed}, path={path!r}, counter={self.counter})"

    def __eq__(self, other):
        if not isinstance(other, RandomStream):
            return NotImplemented
        return (self.root_seed, self.label_path, self.counter) == (
            other.root_seed, other.label_path, other.counter)

    def __hash__(self):
        return hash((self.root_seed, self.label_path, self.counter))

    def copy(self):
        return RandomStream(self.root_seed, self.label_path, self.counter)

    def derive(self, label):
        return derive_stream(self, label)

    def words(self, n):
        """Next ``n`` raw uint64 words; advances the counter by ``n``."""
        n = int(n)
        if n < 0:
            raise InvalidParameterError("n must be non-negative")
        start = self.counter
        block, skip = divmod(start, 4)
        bg = np.random.Philox(key=self._key, counter=block)
        out = bg.random_raw(skip + n)[skip:]
        self.counter = start + n
        return out

    def uniform(self, lo=0.0, hi=1.0):
        return float(self.uniforms(1, lo, hi)[0])

    def uniforms(self, n, lo=0.0, hi=1.0):
        if not lo < hi:
            raise InvalidParameterError(f"invalid range [{lo}, {hi})")
        u = (self.words(n) >> np.uint64(11)).astype(np.float64) * _TWO_M53
        if lo == 0.0 and hi == 1.0:
            return u
        out = lo + (hi - lo) * u
        # scaling can round up onto hi; keep the interval half-open
        np.minimum(out, np.nextafter(hi, lo), out=out)
        return out

    def integers(self, n, high):
        """``n`` integers uniform on ``[0, high)``."""
        if high < 1:
            raise InvalidParameterError("high must be positive")
        u = self.uniforms(n)
        return np.minimum((u * high).astype(np.int64), high - 1)

    def generator(self):
        """A numpy Generator keyed on this stream's next word."""
        w = int(self.words(1)[0])
        h = hashlib.blake2b(digest_size=16)
        h.update(self._key.to_bytes(16, "little"))
        h.update(struct.pack("<Q", w))
        return np.random.Generator(np.random.Philox(key=int.from_bytes(h.digest(), "little")))


def derive_stream(parent, label):
    label = str(label)
    if not label:
        raise InvalidParameterError("label must be non-empty")
    return RandomStream(parent.root_seed, parent.label_path + (label,), 0)


def draw_uniform(s, lo, hi):
    return s.uniform(lo, hi)


def split_round_robin(s, L):
    if int(L) < 1:
        raise InvalidParameterError("L must be at least 1")
    return [derive_stream(s, str(i)) for i in range(int(L))]
