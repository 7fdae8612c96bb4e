"""Command-line experiments.  Every run is a pure function of its flags."""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import boosting, halfspace, heavy_hitters, harness, median, meta, rounding, sq
from .distributions import (CoinSource, from_mapping, load_pmf_csv, make_margin_halfspace,
                            uniform_discrete)
from .errors import ReproError
from .randomness import RandomStream

EXIT_OK, EXIT_ERROR, EXIT_GATE = 0, 1, 2


class Outcome:
    def __init__(self, doc, rows=None, columns=None, gate=True):
        self.doc = doc  # JSON document
        self.rows = rows  # CSV rows; defaults to one row of scalar fields
        self.columns = columns
        self.gate = gate


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return None if math.isnan(x) or math.isinf(x) else x
    if isinstance(x, (frozenset, set)):
        return sorted((_clean(v) for v in x), key=repr)
    return x


def _report_doc(rep, **extra):
    d = rep.to_dict()
    d.update(extra)
    return d


def _root(args, name):
    return RandomStream(args.seed, (name,))


# subcommands -------------------------------------------------------------

def cmd_rstat(args):
    p = sq.SqParams(args.tau, args.rho, args.delta)
    n = args.n or sq.rstat_sample_size(p)
    coin = CoinSource(args.coin_bias)
    A = meta.AlgorithmHandle(lambda x, r: sq.rstat(sq.IDENTITY, x, p, r, strict=args.n is None), n, "rstat")
    rep = estimate(A, coin, args, lambda v: abs(v - args.coin_bias) <= args.tau,
                   params=dict(tau=args.tau, rho=args.rho, delta=args.delta, n=n, coin_bias=args.coin_bias))
    return Outcome(_report_doc(rep), gate=rep.ci95[0] >= 1 - args.rho)


def estimate(A, source, args, accuracy, params):
    return harness.estimate_reproducibility(A, source, args.trials, _root(args, A.name),
                                            accuracy, params, args.seed)


def _pmf_source(args):
    if args.pmf:
        return load_pmf_csv(args.pmf, getattr(args, "bits", None))
    return uniform_discrete(getattr(args, "bits", None) or 2)


def cmd_heavy(args):
    # default: {0: 0.6, 1: 0.3, 2: 0.1} on 2-bit strings
    src = _pmf_source(args) if args.pmf else from_mapping(2, {0: 0.6, 1: 0.3, 2: 0.1})
    hp = heavy_hitters.HhParams(args.rho, args.v, args.eps)
    q1, q2 = heavy_hitters.hh_sample_sizes(hp)
    q1, q2 = args.q1 or q1, args.q2 or q2
    root = _root(args, "heavy")
    sets, agree, fails = {}, 0, []
    for i in range(args.trials):
        r = root.derive(f"trial{i}")
        ds = root.derive(f"data{i}")
        a = heavy_hitters.r_heavy_hitters(src, hp, r.copy(), ds.derive("a"), (q1, q2))
        b = heavy_hitters.r_heavy_hitters(src, hp, r.copy(), ds.derive("b"), (q1, q2))
        agree += a == b
        key = json.dumps(sorted(a))
        sets[key] = sets.get(key, 0) + 1
    lo, hi = harness.clopper_pearson(agree, args.trials)
    doc = dict(trials=args.trials, agreements=agree, repro_rate=agree / args.trials, ci95=[lo, hi],
               params=dict(rho=args.rho, v=args.v, eps=args.eps, q1=q1, q2=q2, bits=src.bits),
               seed=args.seed, returned_sets=dict(sorted(sets.items())), failures=fails)
    return Outcome(doc, gate=lo >= 1 - 1.2 * args.rho)


def cmd_median(args):
    src = _pmf_source(args)
    over = {k: v for k, v in dict(n_m=args.nm, n_sq=args.nsq, n_sq_base=args.nsq_base,
                                   q1=args.q1, q2=args.q2).items() if v}
    p = median.MedianParams(args.rho, src.bits, args.tau, args.delta, args.cscale, over)
    n = median.median_sample_size(p)
    A = meta.AlgorithmHandle(lambda x, r: median.r_median(x, p, r), n, "median")
    rep = estimate(A, src, args, lambda x: median.is_approx_median(src.pmf, x, args.tau),
                   params=dict(rho=args.rho, bits=src.bits, tau=args.tau, delta=args.delta,
                               c_scale=args.cscale, overrides=over, n=n))
    acc = rep.accuracy_rate if rep.accuracy_rate is not None else 0.0
    return Outcome(_report_doc(rep, log_star=p.log_star), gate=acc >= 1 - args.delta)


def _margin_source(args, root):
    return make_margin_halfspace(args.dim, args.margin, root.derive("source"))


def cmd_wkl(args):
    root = _root(args, "wkl")
    src = _margin_source(args, root)
    wp = halfspace.WklParams(args.rho, args.dim, args.margin, args.scheme, m_override=args.m_override)
    A = meta.AlgorithmHandle(lambda x, r: halfspace.r_halfspace_wkl(x, wp, r), wp.m, "wkl")
    test = src.sample(4000, root.derive("test"))

    def good(h):
        return 0.5 * float(np.mean(test.labels * h(test.points))) >= args.margin / 4

    rep = harness.estimate_reproducibility(A, src, args.trials, root.derive("runs"), good,
                                           dict(scheme=args.scheme, dim=args.dim, margin=args.margin,
                                                rho=args.rho, m=wp.m, k=wp.k), args.seed)
    budget = wp.budget()
    return Outcome(_report_doc(rep, budget=budget, bound_m=wp.bound_m),
                   gate=(1 - rep.ci95[1]) <= budget)


def cmd_boost(args):
    root = _root(args, "boost")
    src = _margin_source(args, root)
    gamma = args.margin / 4
    bp = boosting.BoostParams(args.rho, args.eps, gamma, args.ct, args.pool, args.nstat)
    wp = halfspace.WklParams(args.rho / (3 * bp.T_max), args.dim, args.margin, args.scheme,
                             m_override=args.m_override)
    weak = boosting.rounding_weak_learner(wp)
    test = src.sample(args.n_test, root.derive("test"))
    trials, same, ok = [], 0, 0
    for i in range(args.trials):
        r = root.derive(f"trial{i}")
        runs = []
        for side in ("a", "b"):
            feed = boosting.SourceFeed(src, root.derive(f"data{i}").derive(side))
            try:
                res = boosting.r_boost_trace(feed, weak, bp, r.copy())
                err = float(np.mean(res.hypothesis(test.points) != test.labels))
                runs.append(dict(rounds=[[x.density_estimate, x.hypothesis.fingerprint()] for x in res.rounds],
                                 error=err, drawn=feed.drawn, seq=res.sequence()))
            except ReproError as e:
                runs.append(dict(failure=type(e).__name__))
        a, b = runs
        same += "seq" in a and "seq" in b and a["seq"] == b["seq"]
        ok += a.get("error", 1.0) <= args.eps
        for run in runs:
            run.pop("seq", None)
        trials.append(dict(a=a, b=b))
    doc = dict(trials=args.trials, identical_sequences=same, repro_rate=same / args.trials,
               ci95=list(harness.clopper_pearson(same, args.trials)),
               accuracy_rate=ok / args.trials, seed=args.seed,
               params=dict(dim=args.dim, margin=args.margin, rho=args.rho, eps=args.eps, gamma=gamma,
                           T_max=bp.T_max, m_wkl=wp.m, pool=bp.pool_size(wp.m), n_stat=bp.stat_size()),
               runs=trials)
    return Outcome(doc, gate=ok / args.trials >= 0.8)


def cmd_amplify(args):
    root = _root(args, "amplify")
    src = CoinSource(args.bias)
    A = meta.majority_vote_handle(args.bias, args.flips)
    sizes = (args.q1, args.q2) if args.q1 and args.q2 else None
    agree = bottoms = 0
    for i in range(args.trials):
        s = root.derive(f"trial{i}")
        a = meta.amplify(A, args.eta, args.nu, args.beta, args.rho, src, s.copy(), root.derive(f"a{i}"), sizes)
        b = meta.amplify(A, args.eta, args.nu, args.beta, args.rho, src, s.copy(), root.derive(f"b{i}"), sizes)
        agree += a.output == b.output
        bottoms += (a.output is meta.BOTTOM) + (b.output is meta.BOTTOM)
    k, hp = meta.amplify_params(args.eta, args.rho, args.beta)
    lo, hi = harness.clopper_pearson(agree, args.trials)
    doc = dict(trials=args.trials, agreements=agree, repro_rate=agree / args.trials, ci95=[lo, hi],
               bottom_rate=bottoms / (2 * args.trials), seed=args.seed,
               params=dict(eta=args.eta, nu=args.nu, beta=args.beta, rho=args.rho, k=k, v=hp.v,
                           eps=hp.eps, sizes=list(sizes or heavy_hitters.hh_sample_sizes(hp)),
                           full_sizes=list(heavy_hitters.hh_sample_sizes(hp))))
    return Outcome(doc, gate=lo >= 1 - args.rho)


def cmd_reuse(args):
    p = sq.SqParams(args.tau, args.rho, args.delta)
    n = args.n or sq.rstat_sample_size(p)
    res = meta.data_reuse_experiment(meta.identity_then_flip, args.m, p, n, args.trials,
                                     _root(args, "reuse"), mechanism=args.mechanism)
    doc = dict(tv=res.tv, tv_max=res.tv_max, tv_sd=res.tv_sd, trials=res.trials, bound=res.bound,
               seed=args.seed, params=dict(tau=args.tau, rho=args.rho, delta=args.delta, n=n, m=args.m,
                                           mechanism=args.mechanism))
    return Outcome(doc, gate=res.tv <= res.bound + 3 * res.tv_sd / math.sqrt(max(1, res.trials)))


def cmd_gen_check(args):
    root = _root(args, "gen-check")
    src = _margin_source(args, root)
    wp = halfspace.WklParams(args.rho, args.dim, args.margin, "box", m_override=args.m_override)
    learner = meta.AlgorithmHandle(lambda x, r: halfspace.r_halfspace_wkl(x, wp, r), wp.m, "wkl")
    res = meta.generalization_check(learner, src, wp.m, args.n_test, args.delta, args.trials,
                                    root.derive("r"), root.derive("data"))
    rep = harness.estimate_reproducibility(learner, src, args.trials, root.derive("repro"))
    rho_hat = 1 - rep.repro_rate
    sigma = harness.binomial_sigma(res.violation_rate, args.trials)
    doc = dict(violation_rate=res.violation_rate, violations=res.violations, trials=res.trials,
               slack=res.slack, rho_hat=rho_hat, delta=args.delta, seed=args.seed,
               params=dict(dim=args.dim, margin=args.margin, m=wp.m, k=wp.k))
    return Outcome(doc, gate=res.violation_rate <= rho_hat + args.delta + 3 * sigma)


def cmd_coin_sweep(args):
    ms = [int(x) for x in args.ms.split(",")] if args.ms else harness.log_spaced(args.m_min, args.m_max, args.points)
    rows = harness.coin_sweep(ms, args.tau, args.trials, _root(args, "coin-sweep"), args.rho, args.delta)
    try:
        fit = harness.coin_scaling_fit(rows)
        fit_doc = dict(slope=fit.slope, intercept=fit.intercept, points=fit.points, consistent=fit.consistent)
        gate = fit.consistent
    except ReproError as e:
        fit_doc, gate = dict(error=str(e)), False
    doc = dict(rows=rows, fit=fit_doc, seed=args.seed, params=dict(tau=args.tau, rho=args.rho, delta=args.delta))
    cols = ["m", "trials", "disagreements", "rho_hat", "ci_lo", "ci_hi", "success_rate"]
    return Outcome(doc, rows=rows, columns=cols, gate=gate)


def cmd_foams_probe(args):
    root = _root(args, "foams-probe")
    eps_grid = [float(x) for x in args.eps_grid.split(",")]
    rows = []
    for eps in eps_grid:
        es = root.derive(repr(eps))
        counts = {"foam": 0, "box": 0}
        for i in range(args.draws):
            ts = es.derive(str(i))
            x = ts.uniforms(args.dim) * 8
            u = ts.generator().standard_normal(args.dim)
            y = x + eps * u / np.linalg.norm(u)
            for kind in counts:
                sch = rounding.construct_scheme(kind, args.dim, ts.derive(kind))
                pts = sch.apply(np.vstack([x, y]))
                counts[kind] += not np.array_equal(pts[0], pts[1])
        f, b = counts["foam"] / args.draws, counts["box"] / args.draws
        rows.append(dict(eps=eps, draws=args.draws, foam_rate=f, box_rate=b,
                         foam_bound=7 * eps, box_bound=args.dim * eps))
    gate = all(r["foam_rate"] <= r["foam_bound"] + 3 * harness.binomial_sigma(r["foam_rate"], r["draws"])
               for r in rows)
    cols = ["eps", "draws", "foam_rate", "box_rate", "foam_bound", "box_bound"]
    return Outcome(dict(rows=rows, seed=args.seed, dim=args.dim), rows=rows, columns=cols, gate=gate)


# plumbing ---------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="reprolearn", description="Reproducible learning experiments.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--gate", action="store_true", help="exit 2 when the experiment's check fails")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, trials, helptext):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.set_defaults(fn=fn, default_trials=trials)
        return p

    p = add("rstat", cmd_rstat, 200, "paired-run reproducibility of a statistical query on a coin")
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--rho", type=float, default=0.2)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--coin-bias", type=float, default=0.5)
    p.add_argument("--n", type=int, default=None, help="sample size (default: guaranteed size)")

    p = add("heavy", cmd_heavy, 100, "heavy hitters of a pmf")
    p.add_argument("--pmf", default=None, help="CSV of index,probability")
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--v", type=float, default=0.45)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--q1", type=int, default=None)
    p.add_argument("--q2", type=int, default=None)

    p = add("median", cmd_median, 20, "approximate median over d-bit integers")
    p.add_argument("--pmf", default=None)
    p.add_argument("--bits", type=int, default=4)
    p.add_argument("--tau", type=float, default=0.2)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=1 / 3)
    p.add_argument("--cscale", type=float, default=1.0)
    p.add_argument("--nm", type=int, default=5)
    p.add_argument("--nsq", type=int, default=300)
    p.add_argument("--nsq-base", type=int, default=300)
    p.add_argument("--q1", type=int, default=30)
    p.add_argument("--q2", type=int, default=300)

    p = add("wkl", cmd_wkl, 50, "halfspace weak learner")
    p.add_argument("--scheme", choices=("box", "foam"), default="box")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--m-override", type=int, default=2000)

    p = add("boost", cmd_boost, 5, "boosted halfspace learner")
    p.add_argument("--scheme", choices=("box", "foam"), default="box")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--rho", type=float, default=0.3)
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--ct", type=float, default=4.0)
    p.add_argument("--m-override", type=int, default=300)
    p.add_argument("--pool", type=int, default=3000)
    p.add_argument("--nstat", type=int, default=50000)
    p.add_argument("--n-test", type=int, default=10000)

    p = add("amplify", cmd_amplify, 50, "amplify a majority-of-flips algorithm")
    p.add_argument("--eta", type=float, default=0.2)
    p.add_argument("--nu", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--bias", type=float, default=0.9)
    p.add_argument("--flips", type=int, default=5)
    p.add_argument("--q1", type=int, default=None, help="override the candidate count")
    p.add_argument("--q2", type=int, default=None, help="override the estimate count")

    p = add("reuse", cmd_reuse, 50, "adaptive data reuse, exact transcript laws")
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--mechanism", choices=("rstat", "raw"), default="rstat")

    p = add("gen-check", cmd_gen_check, 100, "generalization of the weak learner")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--margin", type=float, default=0.3)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--m-override", type=int, default=500)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--n-test", type=int, default=5000)

    p = add("coin-sweep", cmd_coin_sweep, 300, "coin-problem non-reproducibility vs sample size")
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--rho", type=float, default=0.2)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--ms", default=None, help="comma-separated sample sizes")
    p.add_argument("--m-min", type=float, default=100)
    p.add_argument("--m-max", type=float, default=100000)
    p.add_argument("--points", type=int, default=6)

    p = add("foams-probe", cmd_foams_probe, None, "boundary-crossing rates of foams and boxes")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--eps-grid", default="0.01,0.02,0.05,0.1")
    p.add_argument("--draws", type=int, default=500)
    return ap


def render(outcome, fmt):
    if fmt == "csv":
        rows = outcome.rows
        cols = outcome.columns
        if rows is None:
            flat = {k: v for k, v in outcome.doc.items() if not isinstance(v, (dict, list))}
            rows, cols = [flat], list(flat)
        buf = io.StringIO()
        harness.write_csv(rows, cols, buf)
        return buf.getvalue()
    return json.dumps(_clean(outcome.doc), indent=2, sort_keys=True) + "\n"


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.trials is None:
        args.trials = args.default_trials
    try:
        outcome = args.fn(args)
        text = render(outcome, args.format)
    except (ReproError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.gate and not outcome.gate:
        return EXIT_GATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
