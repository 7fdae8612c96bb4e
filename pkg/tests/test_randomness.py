import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reprolearn.errors import InvalidParameterError
from reprolearn.randomness import RandomStream, derive_stream, draw_uniform, split_round_robin


def test_derive_same_label_is_identical(stream):
    a, b = derive_stream(stream, "wkL"), derive_stream(stream, "wkL")
    assert np.array_equal(a.words(100), b.words(100))


def test_sibling_streams_differ(stream):
    a = stream.derive("a").uniforms(10_000)
    b = stream.derive("b").uniforms(10_000)
    assert np.any(a != b)


def test_label_path_is_not_concatenation(stream):
    xy = stream.derive("x").derive("y")
    flat = stream.derive("xy")
    assert xy != flat
    assert not np.array_equal(xy.words(8), flat.words(8))


def test_empty_label_rejected(stream):
    with pytest.raises(InvalidParameterError):
        derive_stream(stream, "")


def test_uniform_range_and_copy_determinism(stream):
    v = draw_uniform(stream.copy(), 0, 1)
    assert 0.0 <= v < 1.0
    assert draw_uniform(stream.copy(), 0, 1) == v


def test_uniform_mean(stream):
    assert abs(stream.uniforms(100_000).mean() - 0.5) < 0.01


def test_counter_random_access(stream):
    full = stream.copy().words(23)
    s = stream.copy()
    s.words(9)
    assert np.array_equal(s.words(14), full[9:])
    assert RandomStream(stream.root_seed, stream.label_path, 9).words(14).tolist() == full[9:].tolist()


@settings(max_examples=50, deadline=None)
@given(st.floats(-50, 50), st.floats(1e-6, 50))
def test_uniforms_half_open(lo, width):
    hi = lo + width
    u = RandomStream(1, ("h",)).uniforms(200, lo, hi)
    assert np.all(u >= lo) and np.all(u < hi)


def test_split_round_robin_single(stream):
    (only,) = split_round_robin(stream, 1)
    assert only == derive_stream(stream, "0")


def test_split_isolation(stream):
    untouched = split_round_robin(stream, 3)[1].uniform()
    parts = split_round_robin(stream, 3)
    parts[0].uniforms(7)
    assert parts[1].uniform() == untouched


def test_split_many_distinct(stream):
    T = 50
    seqs = {tuple(s.words(100).tolist()) for s in split_round_robin(stream, 6 * T)}
    assert len(seqs) == 6 * T


def test_integers_and_generator(stream):
    x = stream.copy().integers(1000, 7)
    assert x.min() >= 0 and x.max() <= 6
    g1, g2 = stream.copy().generator(), stream.copy().generator()
    assert g1.standard_normal() == g2.standard_normal()


def test_seed_changes_output():
    assert RandomStream(1).words(4).tolist() != RandomStream(2).words(4).tolist()
