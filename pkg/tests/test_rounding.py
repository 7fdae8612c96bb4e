import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from reprolearn.errors import FoamBudgetError, InvalidParameterError
from reprolearn.randomness import RandomStream
from reprolearn.rounding import (BoxScheme, IntervalPartition, apply_rounding, construct_boxes,
                                 construct_foams, construct_scheme, round_interval, round_interval_many)


def test_hand_trace():
    P = IntervalPartition(0.2, 0.05)
    assert [round(b, 12) for b in P.boundaries()] == [0.05, 0.25, 0.45, 0.65, 0.85]
    assert round_interval(0.5, P) == pytest.approx(0.55)


def test_zero_offset_first_region():
    assert round_interval(0.0, IntervalPartition(0.2, 0.0)) == pytest.approx(0.1)


def test_midpoint_fixed_point():
    P = IntervalPartition(0.2, 0.05)
    assert round_interval(0.35, P) == pytest.approx(0.35)


def test_out_of_range_clamped_with_warning():
    with pytest.warns(RuntimeWarning):
        assert round_interval(1.2, IntervalPartition(0.3, 0.1)) == round_interval(1.0, IntervalPartition(0.3, 0.1))


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(0, 1), st.floats(0, 1))
def test_matches_region_oracle(alpha, frac, v):
    off = alpha * frac
    P = IntervalPartition(alpha, off)
    got = round_interval(v, P)
    assert got == pytest.approx(oracles.interval_round(v, alpha, off), abs=1e-9)
    assert abs(got - v) <= alpha / 2 + 1e-12
    assert round_interval_many([v], P)[0] == pytest.approx(got, abs=1e-12)


def test_partition_validation():
    with pytest.raises(InvalidParameterError):
        IntervalPartition(0.2, 0.3)


def test_box_examples():
    R = BoxScheme(1, [0.3])
    assert R.apply(np.array([0.5]))[0] == pytest.approx(0.3)
    assert R.apply(np.array([0.9]))[0] == pytest.approx(1.3)
    Z = np.array([0.1, 0.7, 0.4])
    assert np.allclose(BoxScheme(3, Z).apply(Z), Z)
    assert np.allclose(BoxScheme(3, Z).apply(Z + [2, -1, 5]), Z + [2, -1, 5])


def test_box_displacement(stream):
    R = construct_boxes(3, stream)
    x = stream.derive("x").uniforms(3000, -5, 5).reshape(-1, 3)
    assert np.max(np.linalg.norm(R.apply(x) - x, axis=1)) <= math.sqrt(3) / 2 + 1e-12


def test_foam_repeatable_and_bounded(stream):
    F = construct_foams(2, stream)
    x = stream.derive("x").uniforms(2000, -3, 3).reshape(-1, 2)
    a = F.apply(x)
    assert np.array_equal(a, F.apply(x))
    assert np.array_equal(a[5], F.apply(x[5]))
    assert np.all(np.abs(a - x) < 1)
    assert np.all(a == np.round(a))
    # a fresh scheme on the same stream rebuilds the same stages
    G = construct_foams(2, stream)
    assert np.array_equal(G.apply(x[::-1]), a[::-1])


def test_foam_1d_total(stream):
    F = construct_foams(1, stream)
    x = np.linspace(0, 1, 1001, endpoint=False)[:, None]
    pts, which = F.assign(x)
    assert np.all(which >= 0)


def test_foam_budget(stream):
    F = construct_foams(3, stream, max_stages=1)
    with pytest.raises(FoamBudgetError):
        F.apply(stream.uniforms(300).reshape(-1, 3))


def test_dimension_mismatch(stream):
    with pytest.raises(InvalidParameterError):
        apply_rounding(construct_scheme("box", 2, stream), np.zeros(3))
    with pytest.raises(InvalidParameterError):
        construct_scheme("hex", 2, stream)


def test_box_pair_disagreement_d2():
    # Pr[R(x) != R(y)] <= d*eps over fresh shifts
    s = RandomStream(3, ("pairs",))
    for eps in (0.01, 0.05, 0.1):
        n = 10_000
        Z = s.derive(f"Z{eps}").uniforms(2 * n).reshape(n, 2)
        x = s.derive(f"x{eps}").uniforms(2 * n, 0, 4).reshape(n, 2)
        ang = s.derive(f"a{eps}").uniforms(n, 0, 2 * math.pi)
        y = x + eps * np.c_[np.cos(ang), np.sin(ang)]
        diff = np.any(np.floor(x - Z + 0.5) != np.floor(y - Z + 0.5), axis=1).mean()
        assert diff <= 2 * eps + 3 * math.sqrt(2 * eps / n)
