import math

import numpy as np
import pytest

import oracles
from reprolearn.distributions import CoinSource
from reprolearn.errors import InsufficientSampleError, InvalidParameterError
from reprolearn.sq import (IDENTITY, SqParams, SqQuery, effective_rho, rstat, rstat_sample_size,
                           rstat_trace, solve_coin)


def test_sample_size_default():
    # the bound evaluates to 24529.25, so the ceiling is 24530
    assert rstat_sample_size(SqParams(0.1, 0.2, 0.01)) == oracles.RSTAT_N_DEFAULT


def test_sample_size_small_case():
    p = SqParams(0.5, 0.9, 0.05)
    n = rstat_sample_size(p)
    assert n == oracles.rstat_n(0.5, 0.9, 0.05) == 38  # closed form alone gives 35
    assert n >= math.log(2 / p.delta) / (2 * p.tau_prime ** 2)


def test_sample_size_pole():
    sizes = [rstat_sample_size(SqParams(0.1, 0.2, d)) for d in (0.09, 0.099, 0.0999)]
    assert sizes[0] < sizes[1] < sizes[2]
    with pytest.raises(InvalidParameterError):
        SqParams(0.1, 0.2, 0.1)


def test_alpha_and_tau_prime_split_tolerance():
    p = SqParams(0.1, 0.2, 0.01)
    assert p.tau_prime + p.alpha / 2 == pytest.approx(p.tau)


def test_constant_query(stream):
    zero = SqQuery(lambda x: np.zeros(len(x)), "zero")
    p = SqParams(0.1, 0.2, 0.01)
    tr = rstat_trace(zero, np.arange(10), p, stream.copy(), strict=False)
    expected = tr.alpha_off / 2 if tr.alpha_off > 0 else tr.alpha / 2
    assert tr.output == pytest.approx(expected)
    assert rstat(zero, np.arange(99), p, stream.copy(), strict=False) == tr.output


def test_guard(stream):
    with pytest.raises(InsufficientSampleError):
        rstat(IDENTITY, np.ones(10), SqParams(0.1, 0.2, 0.01), stream)


def test_coin_trivial(stream):
    assert solve_coin(np.ones(100), 0.1, 0.2, stream.copy(), strict=False) == 1
    assert solve_coin(np.zeros(100), 0.1, 0.2, stream.copy(), strict=False) == -1


def test_coin_correct_at_promised_bias(stream):
    p = SqParams(0.1, 0.2, 0.05)
    n = rstat_sample_size(p)
    wrong = 0
    trials = 300
    for i in range(trials):
        x = CoinSource(0.6).sample(n, stream.derive(f"x{i}"))
        wrong += solve_coin(x, 0.1, 0.2, stream.derive(f"r{i}"), 0.05) != 1
    # delta = 0.05; allow 3 sigma
    assert wrong / trials <= 0.05 + 3 * math.sqrt(0.05 * 0.95 / trials)


def test_effective_rho_matches_guarantee_at_full_size():
    p = SqParams(0.1, 0.2, 0.01)
    assert effective_rho(p, rstat_sample_size(p)) <= p.rho + 1e-9
    assert effective_rho(p, 100) > p.rho
