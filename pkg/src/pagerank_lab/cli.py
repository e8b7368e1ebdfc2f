"""Command-line entry point.

Every subcommand writes its files under ``$PAGERANK_LAB_OUT`` (default: the
current directory) unless given explicit paths, prints a short summary,
and exits 0 only when the checks of that path hold (convergence, fit
quality, concentration coverage and so on); 1 otherwise, 2 on bad input.
"""
import argparse
import math
import os
import sys

import numpy as np

from . import _rng
from ._errors import ConvergenceError, FitError, ParameterError
from .experiment import ExperimentConfig, experiment_sweep
from .graphgen import aggregate_sites, generate_page_graph, read_page_graph, write_page_graph
from .learn import (QuadraticObjective, adaptive_gd, bounded_entry_quadratic, coordinate_descent,
                    objective_and_gradient, synthetic_query, write_instance, write_trace_csv)
from .mcmc import (burn_in_steps, concentration_study, ensemble_snapshot,
                   explicit_bernoulli_bound, required_sample_size, run_walker)
from .powerlaw import loglog_fit, rank_sort, write_rank_plot
from .solvers import REPORT_CSV_HEADER, dense_stationary_oracle, polyak_tremba, power_iteration
from .sparse import RankVector, read_rank_csv, read_site_graph, residual_l1, write_rank_csv, write_site_graph

OUT_ENV = "PAGERANK_LAB_OUT"


def out_path(name):
    d = os.environ.get(OUT_ENV, ".")
    os.makedirs(d, exist_ok=True)
    return os.path.join(d, name)


def _verdict(ok, what):
    print(f"{'PASS' if ok else 'FAIL'}: {what}")
    return 0 if ok else 1


def cmd_generate(args):
    g = generate_page_graph(args.pages, args.a, args.seed)
    path = args.out or out_path("pages.bopg")
    write_page_graph(g, path)
    indeg = g.indegrees()
    print(f"{g.n_pages} pages, a={g.a!r}, max in-degree {indeg.max()} -> {path}")
    return 0


def cmd_aggregate(args):
    M = aggregate_sites(read_page_graph(args.pages), args.m)
    path = args.out or out_path("sites.bosg")
    write_site_graph(M, path)
    print(f"{M.n_sites} sites, {M.nnz} entries, m={M.m} -> {path}")
    return 0


def cmd_pagerank(args):
    M = read_site_graph(args.graph)
    s = args.solver
    if s == "mpi":
        p, rep = power_iteration(M, args.delta, args.eps, args.max_iter)
        print(REPORT_CSV_HEADER)
        print(rep.csv_row())
        ok = rep.converged and rep.final_residual <= args.eps
    elif s == "polyak-tremba":
        p, rep = polyak_tremba(M, T=args.steps, delta=args.pt_delta)
        print(REPORT_CSV_HEADER)
        print(rep.csv_row())
        ok = rep.final_residual <= args.eps or args.eps_unset
    elif s == "dense":
        p = dense_stationary_oracle(M, args.delta)
        print(f"dense residual {p.residual:.3e}")
        ok = p.residual <= 1e-9
    elif s == "mcmc":
        p = run_walker(M, args.delta, args.steps, args.seed)
        print(f"one walker, {args.steps} steps, residual {residual_l1(M, args.delta, p.values):.3e}")
        ok = p.is_distribution()
    else:
        T0 = args.burn_in or burn_in_steps(args.delta, M.n_sites, args.eps)
        snap = ensemble_snapshot(M, args.delta, args.walkers, T0, args.seed, args.lanes)
        p = RankVector(snap.frequencies, "ensemble", T0, seed=args.seed)
        print(f"{args.walkers} walkers after {T0} steps; "
              f"95% half-width {explicit_bernoulli_bound(args.walkers, 0.05):.4f} per site")
        ok = int(snap.counts.sum()) == args.walkers
    path = args.out or out_path(f"rank_{s}.csv")
    write_rank_csv(p, path)
    print(f"-> {path}")
    return _verdict(ok, f"{s} contract")


def cmd_fit(args):
    p = read_rank_csv(args.ranks)
    plot = rank_sort(p)
    window = tuple(args.window) if args.window else None
    fit = loglog_fit(plot, window)
    path = args.out or out_path("rank_plot.csv")
    write_rank_plot(plot, path)
    print(f"g={fit.slope:.5f} intercept={fit.intercept:.5f} r2={fit.r_squared:.5f} "
          f"ranks {fit.rank_window[0]}..{fit.rank_window[1]} -> {path}")
    return _verdict(fit.r_squared >= args.min_r2, f"r2 >= {args.min_r2}")


def cmd_sweep(args):
    cfg = ExperimentConfig(args.a_values, args.graphs_per_a, args.n_sites, args.m, args.delta,
                           args.eps, args.base_seed, tuple(args.window) if args.window else None)
    out = args.out or os.environ.get(OUT_ENV, "sweep")
    res = experiment_sweep(cfg, out, workers=args.workers, log=print)
    failed = [r for r in res.fit_rows if r.split(",")[-1]]
    r2 = np.array([float(r.split(",")[4]) for r in res.fit_rows])
    spread = max(hi - lo for _, _, lo, hi in res.summary)
    g = [s[1] for s in res.summary]
    print(f"summary -> {os.path.join(out, 'summary.csv')}")
    code = _verdict(not failed, "every run succeeded")
    code |= _verdict(bool(np.all(r2 >= args.min_r2)), f"min r2 {np.nanmin(r2):.4f} >= {args.min_r2}")
    code |= _verdict(spread <= args.max_spread, f"max g spread {spread:.4f} <= {args.max_spread}")
    if len(g) > 1:
        d = np.diff(g)
        mono = bool(np.all(d > 0) or np.all(d < 0))
        # reported, not enforced: see the README on the measured g(a) shape
        print(f"{'monotone' if mono else 'not monotone'} g over a: "
              + ", ".join(f"{x:.4f}" for x in g))
    return code


def cmd_mcmc_study(args):
    g = generate_page_graph(args.n_sites * args.m, args.a, args.seed)
    M = aggregate_sites(g, args.m)
    v = dense_stationary_oracle(M, args.delta).values
    T0 = burn_in_steps(args.delta, M.n_sites, args.burn_in_eps)
    frac, errors, bound = concentration_study(M, v, args.delta, args.walkers, T0, args.trials,
                                              args.seed, args.C, args.sigma)
    path = args.out or out_path("mcmc_study.csv")
    with open(path, "w") as fh:
        fh.write("trial,l2_error,bound\n")
        fh.writelines(f"{k},{e:.17g},{bound:.17g}\n" for k, e in enumerate(errors))
    print(f"T0={T0}, bound {bound:.4f}, coverage {frac:.3f} over {args.trials} trials -> {path}")
    return _verdict(frac >= 1 - args.sigma, f"coverage >= {1 - args.sigma:.2f}")


def cmd_learn(args):
    rng = np.random.default_rng(_rng.derive_key(args.seed, _rng.STREAM_SYNTHETIC, 1))
    x_true = rng.standard_normal(2 * args.l)
    if args.problem == "quadratic":
        Q = QuadraticObjective(bounded_entry_quadratic(args.dim, args.seed), np.ones(args.dim))
        x0 = np.zeros(args.dim)
        if args.method == "cd":
            Q.track(x0)
            _, rep = coordinate_descent(Q.partial, x0, args.eps, gradient=Q.tracked_gradient,
                                        lipschitz=Q.coordinate_lipschitz, on_update=Q.move,
                                        seed=args.seed, max_iter=args.max_iter)
            per = (Q.madds - args.dim ** 2) / max(1, rep.iterations)
            print(f"{rep.iterations} coordinate steps, {per:.1f} multiply-adds each")
            return _verdict(rep.converged and per <= 3 * args.dim, "per-step cost <= 3d")
        oracle = Q.oracle
    else:
        queries = [synthetic_query(args.n, args.l, x_true, _rng.derive_key(args.seed, k), T=args.T)
                   for k in range(args.queries)]
        for k, q in enumerate(queries):
            write_instance(q, out_path(f"query_{k}.sprl"))
        x0 = np.zeros(2 * args.l)
        oracle = lambda z: objective_and_gradient(queries, z)  # noqa: E731
    _, rep = adaptive_gd(oracle, x0, args.eps, max_iter=args.max_iter, strict=False)
    path = out_path("trace.csv")
    write_trace_csv(rep, path)
    print(f"{rep.iterations} iterations, |grad| {rep.final_gradient_norm:.3e}, "
          f"{rep.evals_per_iteration:.2f} evals/iteration -> {path}")
    return _verdict(rep.converged and rep.evals_per_iteration <= 4, "converged, <= 4 evals/iteration")


def cmd_sample_size(args):
    N = required_sample_size(args.eps, args.sigma)
    hold = explicit_bernoulli_bound(N, args.sigma)
    prev = explicit_bernoulli_bound(N - 1, args.sigma) if N > 1 else math.inf
    print(f"N={N}: half-width {hold:.6f} (N-1: {prev:.6f}) for eps={args.eps}, sigma={args.sigma}")
    return _verdict(hold <= args.eps * (1 + 1e-12) < prev, "bound holds at N and fails at N-1")


def build_parser():
    p = argparse.ArgumentParser(prog="pagerank-lab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate", help="Buckley-Osthus page graph")
    s.add_argument("--pages", type=int, default=100_000)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("aggregate", help="group pages into sites")
    s.add_argument("pages")
    s.add_argument("--m", type=int, default=10)
    s.add_argument("--out")
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("pagerank", help="solve a site graph")
    s.add_argument("graph")
    s.add_argument("--solver", choices=["mpi", "polyak-tremba", "mcmc", "ensemble", "dense"],
                   default="mpi")
    s.add_argument("--delta", type=float, default=0.15)
    s.add_argument("--eps", type=float, default=None)
    s.add_argument("--steps", type=int, default=1000,
                   help="Polyak-Tremba averaging length or single-walker steps")
    s.add_argument("--walkers", type=int, default=10_000)
    s.add_argument("--burn-in", type=int, default=0, help="ensemble steps (0: from delta, n, eps)")
    s.add_argument("--pt-delta", type=float, default=0.0, help="teleport weight for Polyak-Tremba")
    s.add_argument("--lanes", type=int, default=1)
    s.add_argument("--max-iter", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_pagerank)

    s = sub.add_parser("fit", help="power-law fit of a rank CSV")
    s.add_argument("ranks")
    s.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--min-r2", type=float, default=0.97)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("sweep", help="g(a) ensemble sweep")
    s.add_argument("--a-values", type=float, nargs="+", default=[0.277, 1.0, 5.0, 30.0])
    s.add_argument("--graphs-per-a", type=int, default=15)
    s.add_argument("--n-sites", type=int, default=10_000)
    s.add_argument("--m", type=int, default=10)
    s.add_argument("--delta", type=float, default=0.15)
    s.add_argument("--eps", type=float, default=1e-7)
    s.add_argument("--base-seed", type=int, default=0)
    s.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--min-r2", type=float, default=0.97)
    s.add_argument("--max-spread", type=float, default=0.2)
    s.add_argument("--out", help="output directory")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("mcmc-study", help="ensemble concentration on a small graph")
    s.add_argument("--n-sites", type=int, default=50)
    s.add_argument("--m", type=int, default=5)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--delta", type=float, default=0.15)
    s.add_argument("--walkers", type=int, default=10_000)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--sigma", type=float, default=0.05)
    s.add_argument("--C", type=float, default=4.0)
    s.add_argument("--burn-in-eps", type=float, default=1e-2)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_mcmc_study)

    s = sub.add_parser("learn", help="supervised PageRank or the bounded-entry quadratic")
    s.add_argument("--problem", choices=["queries", "quadratic"], default="queries")
    s.add_argument("--method", choices=["gd", "cd"], default="gd")
    s.add_argument("--queries", type=int, default=5)
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--l", type=int, default=5)
    s.add_argument("--T", type=int, default=50)
    s.add_argument("--dim", type=int, default=50)
    s.add_argument("--eps", type=float, default=1e-6)
    s.add_argument("--max-iter", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("sample-size", help="walkers needed for a per-site accuracy")
    s.add_argument("--eps", type=float, default=0.05)
    s.add_argument("--sigma", type=float, default=0.01)
    s.set_defaults(func=cmd_sample_size)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "pagerank":
        args.eps_unset = args.eps is None
        if args.eps is None:
            args.eps = 1e-7 if args.solver == "mpi" else 1e-2
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    except (ParameterError, FitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
