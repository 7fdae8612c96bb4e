"""Tools that treat a learning algorithm as a black box: (eta, nu) estimates,
amplification through heavy hitters over its outputs, public vs private
randomness, a generalization check and adaptive data reuse."""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .errors import BOTTOM, InvalidParameterError
from .heavy_hitters import HhParams, hh_sample_sizes, heavy_hitters_from_counts
from .rounding import IntervalPartition, round_interval_many
from .sq import SqParams


@dataclass(frozen=True)
class AlgorithmHandle:
    runner: Callable  # (sample, RandomStream) -> hashable output
    sample_size: int
    name: str = "A"
    # optional: (array of samples stacked on axis 0, RandomStream) -> list of outputs
    batch_runner: Callable = None
    # optional: (count, data stream, RandomStream) -> {output: count}, the exact law
    # of the output histogram over ``count`` fresh samples
    output_counts: Callable = None

    def run_many(self, samples, r):
        if self.batch_runner is not None:
            return list(self.batch_runner(samples, r))
        return [self.runner(smp, r.copy()) for smp in samples]


def _draw_blocks(source, count, m, s):
    flat = source.sample(count * m, s)
    if isinstance(flat, np.ndarray):
        return flat.reshape(count, m, *flat.shape[1:])
    return [flat[i * m:(i + 1) * m] for i in range(count)]


@dataclass(frozen=True)
class EtaNu:
    eta_hat: tuple  # one per random string
    nu_hat: float
    eta: float
    modes: tuple


def estimate_eta_nu(A, source, r_trials, s_trials, s, eta=0.25):
    etas, modes = [], []
    for i in range(r_trials):
        r = s.derive(f"r{i}")
        blocks = _draw_blocks(source, s_trials, A.sample_size, s.derive("data").derive(str(i)))
        outs = Counter(A.run_many(blocks, r))
        mode, freq = max(outs.items(), key=lambda kv: (kv[1], repr(kv[0])))
        etas.append(1.0 - freq / s_trials)
        modes.append(mode)
    nu = float(np.mean([e > eta for e in etas])) if etas else 0.0
    return EtaNu(tuple(etas), nu, eta, tuple(modes))


def amplify_params(eta, rho_target, beta):
    k = math.ceil(3 * math.log2(1 / beta))
    hp = HhParams(rho_target / k, (1.5 - eta) / 2, (0.5 - eta) / 2)
    return k, hp


@dataclass(frozen=True)
class AmplifyResult:
    output: object
    round: int  # -1 when every round came back empty
    rounds: tuple  # heavy-hitter sets per round tried
    draws: int  # examples consumed
    full_draws: int  # the same count at full heavy-hitter sizes


def amplify(A, eta, nu, beta, rho_target, source, s, data, sizes=None):
    """Run heavy hitters over A's output distribution for k fresh random strings.

    ``s`` is shared randomness, ``data`` draws the examples.  ``sizes`` overrides
    the heavy-hitter (Q1, Q2) pair.
    """
    if not (eta < 0.5 and nu < 0.5):
        raise InvalidParameterError("need eta, nu < 1/2")
    if nu + rho_target >= 0.75:
        raise InvalidParameterError("need nu + rho_target < 3/4")
    k, hp = amplify_params(eta, rho_target, beta)
    full = hh_sample_sizes(hp)
    q1, q2 = sizes if sizes is not None else full
    found, draws = [], 0
    for i in range(k):
        rs = s.derive(f"round{i}")
        r_inner = rs.derive("inner")
        ds = data.derive(f"round{i}")
        cands = A.run_many(_draw_blocks(source, q1, A.sample_size, ds.derive("candidates")), r_inner)
        if A.output_counts is not None:
            counts = A.output_counts(q2, ds.derive("estimates"), r_inner)
        else:
            counts = Counter(A.run_many(_draw_blocks(source, q2, A.sample_size, ds.derive("estimates")), r_inner))
        draws += (q1 + q2) * A.sample_size
        out = heavy_hitters_from_counts(cands, counts, q2, hp, rs.derive("hh")).output
        found.append(out)
        if out:
            return AmplifyResult(min(out, key=repr), i, tuple(found), draws,
                                 (i + 1) * sum(full) * A.sample_size)
    return AmplifyResult(BOTTOM, -1, tuple(found), draws, k * sum(full) * A.sample_size)


def majority_vote_handle(bias, flips):
    """Majority bit of ``flips`` coin(bias) flips, with its exact output-count law."""
    p1 = sum(math.comb(flips, j) * bias ** j * (1 - bias) ** (flips - j)
             for j in range(flips + 1) if 2 * j > flips)

    def run(x, r):
        return int(2 * int(np.sum(x)) > len(x))

    def batch(xs, r):
        return (2 * np.asarray(xs).sum(axis=1) > flips).astype(int).tolist()

    def counts(count, s, r):
        k = int(s.generator().binomial(count, p1))
        return {1: k, 0: count - k}

    return AlgorithmHandle(run, flips, "majority", batch, counts)


def compare_public_private(A2, source, m, trials, s, data):
    """Agreement with shared public bits only vs with everything shared.

    ``A2(sample, r_pub, r_priv)``.  Returns (pub_only_rate, all_public_rate).
    """
    pub = allp = 0
    for i in range(trials):
        r_pub = s.derive(f"pub{i}")
        r_priv = s.derive(f"priv{i}")
        x1 = source.sample(m, data.derive(f"x1-{i}"))
        x2 = source.sample(m, data.derive(f"x2-{i}"))
        own1, own2 = data.derive(f"own1-{i}"), data.derive(f"own2-{i}")
        pub += A2(x1, r_pub.copy(), own1) == A2(x2, r_pub.copy(), own2)
        allp += A2(x1, r_pub.copy(), r_priv.copy()) == A2(x2, r_pub.copy(), r_priv.copy())
    return pub / trials, allp / trials


@dataclass(frozen=True)
class GeneralizationResult:
    violation_rate: float
    violations: int
    trials: int
    slack: float


def _risk(h, points, labels):
    pred = np.where(np.asarray(h(points)) >= 0, 1, -1)
    return float(np.mean(pred != labels))


def generalization_check(learner, source, n_train, n_test, delta, trials, s, data):
    """Fraction of trials with true risk > training risk + sqrt(ln(1/delta)/(2n))."""
    slack = math.sqrt(math.log(1 / delta) / (2 * n_train))
    bad = 0
    exact = hasattr(source, "probs")
    for i in range(trials):
        train = source.sample(n_train, data.derive(f"train{i}"))
        h = learner.runner(train, s.derive(f"r{i}"))
        emp = _risk(h, train.points, train.labels)
        if exact:
            pred = np.where(np.asarray(h(source.points)) >= 0, 1, -1)
            true = source.expect(pred != source.labels)
        else:
            test = source.sample(n_test, data.derive(f"test{i}"))
            true = _risk(h, test.points, test.labels)
        bad += true > emp + slack
    return GeneralizationResult(bad / trials, bad, trials, slack)


# adaptive statistical queries on a coin -----------------------------------

def identity_then_flip(prefix):
    """Ask for the mean; then ask it again, or its complement if it looked < 1/2."""
    if not prefix:
        return (0.0, 1.0)
    return (0.0, 1.0) if prefix[-1][1] >= 0.5 else (1.0, 0.0)


def _answers(query, ks, n, j, params, r, mechanism):
    """Answer for every count of ones in ``ks`` (vectorised)."""
    mean = query[0] * (n - ks) / n + query[1] * ks / n
    if mechanism == "raw":
        return mean
    off = r.derive(f"q{j}").uniform(0.0, params.alpha)
    return round_interval_many(mean, IntervalPartition(params.alpha, off))


def transcript_distribution(chooser, m, mode, params, n, r, p=0.5, mechanism="rstat"):
    """Exact transcript law for m adaptive queries on coin(p), given randomness r.

    ``mode`` is "fresh_each" (a new n-sample per query) or "reuse_one".
    """
    ks = np.arange(n + 1)
    pmf = stats.binom.pmf(ks, n, p)
    live = pmf > 1e-15
    ks, pmf = ks[live], pmf[live]
    out = {}

    if mode == "reuse_one":
        def walk(idx, prefix):
            j = len(prefix)
            if j == m:
                out[prefix] = out.get(prefix, 0.0) + float(pmf[idx].sum())
                return
            q = chooser(prefix)
            a = _answers(q, ks[idx], n, j, params, r, mechanism)
            for val in np.unique(a):
                walk(idx[a == val], prefix + ((q, float(val)),))
        walk(np.arange(len(ks)), ())
    elif mode == "fresh_each":
        def walk(prob, prefix):
            j = len(prefix)
            if j == m:
                out[prefix] = out.get(prefix, 0.0) + prob
                return
            q = chooser(prefix)
            a = _answers(q, ks, n, j, params, r, mechanism)
            vals, inv = np.unique(a, return_inverse=True)
            w = np.bincount(inv, weights=pmf)
            for val, pw in zip(vals, w):
                walk(prob * pw, prefix + ((q, float(val)),))
        walk(1.0, ())
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    return out


def total_variation(P, Q):
    keys = set(P) | set(Q)
    return 0.5 * sum(abs(P.get(k, 0.0) - Q.get(k, 0.0)) for k in keys)


@dataclass(frozen=True)
class ReuseResult:
    tv: float  # mean over random strings of the exact conditional distance
    tv_max: float
    tv_sd: float
    trials: int
    bound: float


def data_reuse_experiment(chooser, m, params, n, trials, s, p=0.5, mechanism="rstat"):
    """Distance between fresh-sample and single-sample transcripts.

    For each random string the two transcript laws are computed exactly; the
    average over strings upper-bounds the distance between the marginals.
    """
    tvs = []
    for i in range(trials):
        r = s.derive(f"r{i}")
        P = transcript_distribution(chooser, m, "fresh_each", params, n, r, p, mechanism)
        Q = transcript_distribution(chooser, m, "reuse_one", params, n, r, p, mechanism)
        tvs.append(total_variation(P, Q))
    tvs = np.asarray(tvs)
    sd = float(tvs.std(ddof=1)) if len(tvs) > 1 else 0.0
    rho = params.rho if isinstance(params, SqParams) else float("nan")
    return ReuseResult(float(tvs.mean()), float(tvs.max()), sd, trials, (m - 1) * rho)
