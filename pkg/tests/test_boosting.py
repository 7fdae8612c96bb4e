import math

import numpy as np
import pytest

import oracles
from reprolearn.boosting import (ArrayFeed, BoostParams, Measure, SourceFeed, WeakLearner, measure_eval,
                                 r_boost_trace, rejection_pool_size, rejection_sampler,
                                 strong_halfspace_learner, strong_learner_complexity)
from reprolearn.distributions import LabeledSample, make_finite_margin_source
from reprolearn.errors import BOTTOM, InsufficientSampleError, InvalidParameterError
from reprolearn.halfspace import FunctionHypothesis, WklParams


def _sample(n):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((n, 2))
    return LabeledSample(x, np.where(x[:, 0] >= 0, 1, -1))


def test_measure_values():
    g = 0.2
    assert measure_eval(g, 0) == 1.0
    assert measure_eval(g, 2) == pytest.approx(1 - g)
    assert measure_eval(g, -5) == 1.0


def test_sampler_keeps_everything_at_one(stream):
    s = _sample(50)
    out = rejection_sampler(s, 20, 1.0, stream)
    assert np.array_equal(out.points, s.points[:20])


def test_sampler_bottom_at_zero(stream):
    assert rejection_sampler(_sample(50), 1, 0.0, stream) is BOTTOM


def test_sampler_bottom_rate_matches_binomial(stream):
    s = _sample(1000)
    trials = 4000
    for m_target in (400, 495):
        hits = sum(rejection_sampler(s, m_target, 0.5, stream.derive(f"{m_target}/{i}")) is BOTTOM
                   for i in range(trials))
        p = oracles.binomial_cdf_below(1000, 0.5, m_target)
        assert abs(hits / trials - p) <= 3 * math.sqrt(max(p * (1 - p), 1e-12) / trials) + 1e-9
    assert oracles.BIN_1000_HALF_BELOW_400 < 1e-10


def test_pool_size_formula():
    assert rejection_pool_size(100, 0.1, 0.01) == math.ceil(24 * 100 * math.log(100) / 0.1)


def test_T_max_plumbing():
    eps, tau, c = 0.2, 0.3, 4.0
    assert BoostParams(0.3, eps, tau / 4, c).T_max == math.ceil(c * 16 / (eps * tau ** 2))
    with pytest.raises(InvalidParameterError):
        BoostParams(0.3, 0.2, 1.5)


def test_complexity_formula():
    d, tau, rho, eps = 3, 0.3, 0.1, 0.1
    c = strong_learner_complexity(d, tau, rho, eps, "box")
    assert c["closed_form"] == pytest.approx(d ** 3.75 / (tau ** 10 * rho ** 2.5 * eps ** 4.5))
    assert c["composed"] == c["T_max"] * c["per_round"]
    f = strong_learner_complexity(d, tau, rho, eps, "foam")
    assert f["closed_form"] == pytest.approx(d ** (10 / 9) / (tau ** (76 / 9) * rho ** (20 / 9) * eps ** (28 / 9)))


def test_oracle_weak_learner_terminates(stream):
    src = make_finite_margin_source(2, 0.3, 40, stream.derive("src"))
    target = FunctionHypothesis(lambda X: np.where(X @ src.w >= 0, 1.0, -1.0), "target")
    weak = WeakLearner(lambda smp, s: target, 50)
    bp = BoostParams(0.3, 0.2, 0.45, n_pool=500, n_stat=500)
    res = r_boost_trace(SourceFeed(src, stream.derive("data")), weak, bp, stream.derive("r"))
    err = src.expect(res.hypothesis(src.points) != src.labels)
    assert err == 0.0
    assert len(res.rounds) < bp.T_max


def test_array_feed_exhaustion():
    f = ArrayFeed(_sample(10))
    f.take(6)
    with pytest.raises(InsufficientSampleError):
        f.take(6)


def test_desk_boost_density_invariants(stream):
    src = make_finite_margin_source(2, 0.3, 200, stream.derive("src"))
    res = strong_halfspace_learner(src, 2, 0.3, 0.3, 0.2, "box", stream.derive("r"), stream.derive("d"),
                                   m_override=300, n_pool=3000, n_stat=2000)
    dens = [src.expect(res.measure(t)(src.points, src.labels)) for t in range(1, len(res.rounds) + 1)]
    assert dens[-1] < 0.2
    assert min(dens[:-1]) >= 0.2 / 3
    assert src.expect(res.hypothesis(src.points) != src.labels) <= 0.2


def test_measure_extends():
    m = Measure(0.1)
    h = FunctionHypothesis(lambda X: np.ones(len(X)))
    m2 = m.extend(h)
    X = np.zeros((3, 2))
    y = np.array([1, -1, 1])
    assert np.allclose(m2.score(X, y), y - m2.theta)
