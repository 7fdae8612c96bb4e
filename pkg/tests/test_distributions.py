import numpy as np
import pytest

from reprolearn.distributions import (CoinSource, DiscreteSource, FiniteLabeledSource, LabeledSample,
                                      SignVectorSource, exact_pmf, from_mapping, load_pmf_csv,
                                      make_finite_margin_source, make_margin_halfspace, point_mass,
                                      sample, uniform_discrete)
from reprolearn.errors import InvalidParameterError


def test_degenerate_coin(stream):
    assert sample(CoinSource(1.0), 5, stream).tolist() == [1, 1, 1, 1, 1]


def test_point_mass(stream):
    assert sample(point_mass(3, 5), 3, stream).tolist() == [5, 5, 5]


def test_fair_coin_mean(stream):
    assert abs(sample(CoinSource(0.5), 100_000, stream).mean() - 0.5) < 0.01


def test_exact_pmfs(stream):
    pmf = exact_pmf(CoinSource(0.3))
    assert pmf[1] == 0.3 and abs(pmf[0] - 0.7) < 1e-15
    assert exact_pmf(uniform_discrete(2)) == {0: 0.25, 1: 0.25, 2: 0.25, 3: 0.25}
    assert exact_pmf(make_margin_halfspace(2, 0.3, stream)) is None


def test_discrete_frequencies(stream):
    src = from_mapping(2, {0: 0.6, 1: 0.3, 2: 0.1})
    x = src.sample(200_000, stream)
    freq = np.bincount(x, minlength=4) / len(x)
    assert np.allclose(freq, [0.6, 0.3, 0.1, 0.0], atol=0.005)
    counts = src.sample_counts(1000, stream)
    assert sum(counts.values()) == 1000 and 3 not in counts


def test_discrete_validation():
    with pytest.raises(InvalidParameterError):
        DiscreteSource(2, [0.5, 0.5])
    with pytest.raises(InvalidParameterError):
        DiscreteSource(1, [0.7, 0.7])


def test_margin_1d(stream):
    src = make_margin_halfspace(1, 0.5, stream.derive("w"))
    smp = src.sample(1000, stream)
    x = smp.points[:, 0]
    assert np.all(np.abs(x) <= 1 + 1e-12)
    assert np.all(x * smp.labels * src.w[0] >= 0.5 - 1e-12)


def test_margin_3d_scan(stream):
    src = make_margin_halfspace(3, 0.2, stream.derive("w"))
    smp = src.sample(10_000, stream)
    xh = smp.points / np.linalg.norm(smp.points, axis=1, keepdims=True)
    assert np.min((xh @ src.w) * smp.labels) >= 0.2


def test_margin_near_one_concentrates(stream):
    src = make_margin_halfspace(2, 0.999, stream.derive("w"))
    smp = src.sample(200, stream)
    assert np.all(np.abs(smp.points @ src.w) >= 0.999)


def test_margin_rejects_bad_tau(stream):
    with pytest.raises(InvalidParameterError):
        make_margin_halfspace(2, 1.0, stream)


def test_finite_source_expectation(stream):
    src = make_finite_margin_source(2, 0.3, 8, stream)
    assert src.points.shape == (8, 2)
    assert src.expect(np.ones(8)) == pytest.approx(1.0)
    xh = src.points / np.linalg.norm(src.points, axis=1, keepdims=True)
    assert np.all((xh @ src.w) * src.labels >= 0.3)
    idx = src.sample_indices(40_000, stream)
    assert np.allclose(np.bincount(idx, minlength=8) / 40_000, 1 / 8, atol=0.01)


def test_finite_source_validation():
    with pytest.raises(InvalidParameterError):
        FiniteLabeledSource(np.eye(2), [1, -1], [0.4, 0.4])


def test_sign_vectors(stream):
    v = SignVectorSource(2).sample(1000, stream)
    assert np.allclose(np.linalg.norm(v, axis=1), 1.0)
    assert abs(v.mean()) < 0.1


def test_labeled_sample_ops():
    a = LabeledSample(np.zeros((3, 2)), np.array([1, -1, 1]))
    b = LabeledSample.concat([a, a[:1]])
    assert len(b) == 4 and b.dim == 2


def test_load_pmf_csv(tmp_path):
    p = tmp_path / "pmf.csv"
    p.write_text("index,prob\n0,0.5\n3,0.5\n")
    src = load_pmf_csv(p)
    assert src.bits == 2 and src.exact_pmf()[3] == 0.5
