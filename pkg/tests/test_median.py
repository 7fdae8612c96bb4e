import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from reprolearn.distributions import from_mapping, point_mass, uniform_discrete
from reprolearn.errors import InvalidParameterError
from reprolearn.median import (MedianParams, batch_medians, cdf_position_ok, is_approx_median, lcp_many,
                               log_star, longest_common_prefix, median_plan, median_sample_size,
                               r_median, r_median_trace, simple_median, simple_median_size)
from reprolearn.randomness import RandomStream


def test_simple_median():
    assert simple_median([1, 2, 3]) == 2
    assert simple_median([5, 5, 5, 5]) == 5
    with pytest.raises(InvalidParameterError):
        simple_median([])


def test_simple_median_band(stream):
    tau, delta = 0.1, 0.1
    n = simple_median_size(tau, delta)
    pmf = np.full(100, 0.01)  # values 1..100 stored as 0..99
    ok = 0
    trials = 1000
    x = stream.integers(trials * n, 100).reshape(trials, n)
    meds = np.sort(x, axis=1)[:, (n + 1) // 2 - 1]
    ok = np.mean((meds + 1 >= 40) & (meds + 1 <= 60))
    assert ok >= 0.9


def test_batch_medians():
    x = np.array([3, 1, 2, 9, 7, 8, 100])
    assert batch_medians(x, 3).tolist() == [2, 8]


def test_lcp_examples():
    assert longest_common_prefix("0110", "0111", 4) == 3
    assert longest_common_prefix(0b0110, 0b0111, 4) == 3
    assert longest_common_prefix(11, 11, 4) == 4
    assert longest_common_prefix(0b1000, 0b0111, 4) == 0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 20), st.data())
def test_lcp_oracle(d, data):
    x = data.draw(st.integers(0, 2 ** d - 1))
    y = data.draw(st.integers(0, 2 ** d - 1))
    assert longest_common_prefix(x, y, d) == oracles.lcp_bits(x, y, d)
    assert lcp_many([x], [y], d)[0] == oracles.lcp_bits(x, y, d)


def test_log_star():
    for x in (1, 2, 4, 16, 65536, 2 ** 20):
        assert log_star(x) == oracles.iterated_log2(x)
    assert log_star(16) == 3


def test_approx_median_definitions():
    pmf = [0.25, 0.25, 0.25, 0.25]
    for x in range(4):
        assert is_approx_median(pmf, x, 0.2) == oracles.approx_median_ok(pmf, x, 0.2)
    assert cdf_position_ok(pmf, 1, 0.05) and not cdf_position_ok(pmf, 2, 0.2)


def test_point_mass_all_zeros():
    p = MedianParams(0.5, 4, 0.2, overrides=dict(n_m=3, n_sq=50, n_sq_base=50, q1=20, q2=100))
    n = median_sample_size(p)
    x = point_mass(4, 0).sample(n, RandomStream(0))
    assert r_median(x, p, RandomStream(1)) == 0


def test_one_bit_base_case(stream):
    p = MedianParams(0.5, 1, 0.1)
    n = median_sample_size(p)
    src = from_mapping(1, {0: 0.9, 1: 0.1})
    assert r_median(src.sample(n, stream.derive("x")), p, stream.derive("r")) == 0


def test_plan_layout():
    p = MedianParams(0.5, 4, 0.2, overrides=dict(n_m=5, n_sq=300, n_sq_base=300, q1=30, q2=300))
    plans = median_plan(p)
    assert sorted(plans) == [1, 2, 4]
    top = plans[4]
    assert top.n_meds == 2 * plans[2].n_total + 30 + 300 + 4 * 300
    assert top.n_total == 5 * top.n_meds
    with pytest.raises(InvalidParameterError):
        MedianParams(0.5, 4, 0.2, overrides=dict(bogus=1))


def test_desk_run_structure(stream):
    p = MedianParams(0.5, 4, 0.2, overrides=dict(n_m=5, n_sq=300, n_sq_base=300, q1=30, q2=300))
    src = uniform_discrete(4)
    x = src.sample(median_sample_size(p), stream.derive("x"))
    res = r_median_trace(x, p, stream.derive("r"))
    assert res.depth <= log_star(2 ** 4)
    top = res.levels[-1]
    assert top.d == 4 and res.output in (top.s0, top.s1)
    assert 1 <= top.ell <= 4
