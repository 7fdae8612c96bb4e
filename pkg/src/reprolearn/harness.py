"""Paired-run reproducibility estimation, sweeps and the coin scaling fit."""

import csv
import io
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from .distributions import CoinSource
from .errors import FitDegenerateError, ReproError
from .sq import solve_coin


def clopper_pearson(k, n, level=0.95):
    if n == 0:
        return (0.0, 1.0)
    a = (1 - level) / 2
    lo = 0.0 if k == 0 else float(stats.beta.ppf(a, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1 - a, k + 1, n - k))
    return (lo, hi)


def binomial_sigma(p, n):
    return math.sqrt(max(p * (1 - p), 0.0) / n) if n else 0.0


@dataclass
class ReproReport:
    trials: int
    agreements: int
    repro_rate: float
    ci95: tuple
    accuracy_rate: float = None
    params: dict = field(default_factory=dict)
    seed: int = None
    failures: list = field(default_factory=list)  # (trial, tag)

    def to_dict(self):
        d = asdict(self)
        d["ci95"] = list(self.ci95)
        d["failures"] = [list(f) for f in self.failures]
        return d

    @property
    def failure_counts(self):
        return dict(Counter(tag for _, tag in self.failures))


def _tag(exc):
    return type(exc).__name__


def estimate_reproducibility(A, source, trials, s, accuracy=None, params=None, seed=None):
    """Run A twice per trial on independent samples with shared randomness.

    Errors count as disagreements and are tagged; ``accuracy(output)`` (if
    given) is scored over every successful run.
    """
    agree = acc_ok = acc_n = 0
    failures = []
    for i in range(trials):
        r = s.derive(f"trial{i}")
        ds = s.derive(f"data{i}")
        outs = []
        for side in ("a", "b"):
            x = source.sample(A.sample_size, ds.derive(side))
            try:
                outs.append(A.runner(x, r.copy()))
            except ReproError as e:
                failures.append((i, f"{side}:{_tag(e)}"))
                outs.append(e)
        good = [o for o in outs if not isinstance(o, Exception)]
        if len(good) == 2 and good[0] == good[1]:
            agree += 1
        if accuracy is not None:
            acc_n += 2
            acc_ok += sum(bool(accuracy(o)) for o in good)
    return ReproReport(
        trials=trials, agreements=agree,
        repro_rate=agree / trials if trials else float("nan"),
        ci95=clopper_pearson(agree, trials),
        accuracy_rate=(acc_ok / acc_n) if acc_n else None,
        params=dict(params or {}), seed=seed, failures=failures)


# sweeps -----------------------------------------------------------------

REPORT_COLUMNS = ["trials", "agreements", "repro_rate", "ci_lo", "ci_hi", "accuracy_rate", "failures"]


@dataclass
class ExperimentConfig:
    """``build(point) -> (AlgorithmHandle, source, accuracy or None)`` per grid point."""

    algorithm: str
    build: object
    grid: list
    trials: int
    seed: int = 0
    out: str = None


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, columns, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
        fh.flush()


def run_sweep(config):
    from .randomness import RandomStream

    keys = []
    for point in config.grid:
        for k in point:
            if k not in keys:
                keys.append(k)
    columns = keys + REPORT_COLUMNS
    root = RandomStream(config.seed, (config.algorithm,))
    rows = []
    fh = open(config.out, "w", newline="") if config.out else io.StringIO()
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for j, point in enumerate(config.grid):
            A, source, acc = config.build(point)
            rep = estimate_reproducibility(A, source, config.trials, root.derive(f"point{j}"), acc)
            row = dict(point)
            row.update(trials=rep.trials, agreements=rep.agreements, repro_rate=rep.repro_rate,
                       ci_lo=rep.ci95[0], ci_hi=rep.ci95[1], accuracy_rate=rep.accuracy_rate,
                       failures=len(rep.failures))
            rows.append(row)
            w.writerow([_fmt(row.get(c)) for c in columns])
            fh.flush()
    finally:
        if config.out:
            fh.close()
    return rows


# the coin problem -----------------------------------------------------------

def log_spaced(lo, hi, points):
    return sorted({int(round(x)) for x in np.logspace(math.log10(lo), math.log10(hi), points)})


def coin_sweep(ms, tau, trials, s, rho=0.2, delta=0.01):
    """Non-reproducibility of the rSTAT coin decision at each sample size.

    Each trial draws a bias uniformly from [1/2 - tau, 1/2 + tau] and runs the
    decision twice on fresh flips with shared randomness.  Success is scored
    separately at the promised biases 1/2 +- tau.  Sizes below rSTAT's
    guarantee are allowed on purpose.
    """
    rows = []
    for m in ms:
        ps = s.derive(f"m{m}")
        disagree = correct = 0
        for i in range(trials):
            r = ps.derive(f"r{i}")
            bias = ps.derive(f"bias{i}").uniform(0.5 - tau, 0.5 + tau)
            coin = CoinSource(bias)
            a = solve_coin(coin.sample(m, ps.derive(f"a{i}")), tau, rho, r.copy(), delta, strict=False)
            b = solve_coin(coin.sample(m, ps.derive(f"b{i}")), tau, rho, r.copy(), delta, strict=False)
            disagree += a != b
            sign = 1 if i % 2 == 0 else -1
            promised = CoinSource(0.5 + sign * tau)
            got = solve_coin(promised.sample(m, ps.derive(f"c{i}")), tau, rho, r.copy(), delta, strict=False)
            correct += got == sign
        lo, hi = clopper_pearson(disagree, trials)
        rows.append({"m": m, "trials": trials, "disagreements": disagree,
                     "rho_hat": disagree / trials, "ci_lo": lo, "ci_hi": hi,
                     "success_rate": correct / trials})
    return rows


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    points: int
    consistent: bool  # slope within [-0.65, -0.35]


def coin_scaling_fit(rows, lo=0.01, hi=0.5):
    use = [(r["m"], r["rho_hat"]) for r in rows if lo < r["rho_hat"] < hi]
    if len(use) < 4:
        raise FitDegenerateError(f"only {len(use)} usable points; need 4")
    x = np.log([u[0] for u in use])
    y = np.log([u[1] for u in use])
    slope, intercept = np.polyfit(x, y, 1)
    slope = float(slope)
    if abs(slope) < 1e-12:
        slope = 0.0
    return ScalingFit(slope, float(intercept), len(use), -0.65 <= slope <= -0.35)
