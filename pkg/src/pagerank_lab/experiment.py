"""The g(a) sweep: generate, aggregate, solve, fit, summarize.

Every run is seeded by ``derive_key(base_seed, STREAM_SWEEP, a, replicate)``,
so the output files depend only on the configuration. Fits for each ``a``
are written to their own file as soon as that ``a`` finishes; a rerun into
the same directory with the same configuration reuses those files.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import json
import os

import numpy as np

from . import _rng
from ._errors import ParameterError
from .graphgen import aggregate_sites, generate_page_graph
from .powerlaw import FIT_CSV_HEADER, fit_csv_row, loglog_fit, rank_sort, write_rank_plot
from .solvers import power_iteration

SWEEP_FIT_HEADER = FIT_CSV_HEADER + ",error"
SUMMARY_HEADER = "a,g_mean,g_min,g_max"


@dataclass
class ExperimentConfig:
    a_values: list = field(default_factory=lambda: [0.277, 1.0, 5.0, 30.0])
    graphs_per_a: int = 15
    n_sites: int = 10_000
    m: int = 10
    delta: float = 0.15
    eps: float = 1e-7
    base_seed: int = 0
    window: tuple | None = None

    def __post_init__(self):
        self.a_values = [float(a) for a in self.a_values]
        if not self.a_values or any(a < 0 for a in self.a_values):
            raise ParameterError("a_values must be a non-empty list of values >= 0")
        if min(self.graphs_per_a, self.n_sites, self.m) < 1:
            raise ParameterError("graphs_per_a, n_sites and m must be positive")
        if not 0 < self.delta < 1 or self.eps <= 0:
            raise ParameterError("need 0 < delta < 1 and eps > 0")
        if self.window is not None:
            self.window = (int(self.window[0]), min(int(self.window[1]), self.n_sites))

    def run_seed(self, a, replicate):
        return _rng.derive_key(self.base_seed, _rng.STREAM_SWEEP, float(a), replicate)


def single_run(cfg, a, replicate):
    """One generate -> aggregate -> solve -> fit pipeline. Returns ``(seed, fit, plot)``."""
    seed = cfg.run_seed(a, replicate)
    g = generate_page_graph(cfg.n_sites * cfg.m, a, seed)
    M = aggregate_sites(g, cfg.m)
    p, _ = power_iteration(M, cfg.delta, cfg.eps)
    plot = rank_sort(p.values)
    return seed, loglog_fit(plot, cfg.window), plot


def _guarded(args):
    cfg, a, rep = args
    try:
        seed, fit, plot = single_run(cfg, a, rep)
        return seed, fit, plot, ""
    except Exception as exc:  # recorded per run, never aborts the sweep
        return cfg.run_seed(a, rep), None, None, f"{type(exc).__name__}: {exc}".replace(",", ";")


def _row(a, seed, fit, error):
    if fit is None:
        return f"{a!r},{seed},nan,nan,nan,,,{error}"
    return fit_csv_row(a, seed, fit) + f",{error}"


def _read_fits(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != SWEEP_FIT_HEADER:
        return None
    return lines[1:]


@dataclass
class SweepResult:
    summary: list
    fit_rows: list
    out_dir: str


def experiment_sweep(cfg, out_dir, workers=1, representative_a=None, log=None):
    """Run the sweep and write ``fits.csv``, ``summary.csv`` and ``rank_plot.csv``.

    ``summary`` rows are ``(a, g_mean, g_min, g_max)`` over successful runs
    (NaN when every run for that ``a`` failed). The rank plot is replicate 0
    at ``representative_a`` (default: 1 if swept, else the first ``a``).
    """
    os.makedirs(out_dir, exist_ok=True)
    parts = os.path.join(out_dir, "parts")
    os.makedirs(parts, exist_ok=True)
    cfg_path = os.path.join(out_dir, "config.json")
    cfg_json = json.dumps(asdict(cfg), sort_keys=True)
    if os.path.exists(cfg_path):
        with open(cfg_path) as fh:
            if fh.read() != cfg_json:
                raise ParameterError(f"{out_dir} holds a sweep with a different configuration")
    else:
        with open(cfg_path, "w") as fh:
            fh.write(cfg_json)
    if representative_a is None:
        representative_a = 1.0 if 1.0 in cfg.a_values else cfg.a_values[0]
    plot_path = os.path.join(out_dir, "rank_plot.csv")

    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    all_rows, summary = [], []
    try:
        for a in cfg.a_values:
            part = os.path.join(parts, f"a={a!r}.csv")
            rows = _read_fits(part) if os.path.exists(part) else None
            need_plot = a == representative_a and not os.path.exists(plot_path)
            if rows is None or len(rows) != cfg.graphs_per_a or need_plot:
                jobs = [(cfg, a, r) for r in range(cfg.graphs_per_a)]
                results = list(pool.map(_guarded, jobs) if pool else map(_guarded, jobs))
                rows = [_row(a, seed, fit, err) for seed, fit, _, err in results]
                tmp = part + ".tmp"
                with open(tmp, "w") as fh:
                    fh.write("\n".join([SWEEP_FIT_HEADER] + rows) + "\n")
                os.replace(tmp, part)
                if a == representative_a and results[0][2] is not None:
                    write_rank_plot(results[0][2], plot_path)
            slopes = np.array([float(r.split(",")[2]) for r in rows])
            ok = slopes[np.isfinite(slopes)]
            g = (float(ok.mean()), float(ok.min()), float(ok.max())) if ok.size else (np.nan,) * 3
            summary.append((a,) + g)
            all_rows.extend(rows)
            if log:
                log(f"a={a!r}: g_mean={g[0]:.4f} g_min={g[1]:.4f} g_max={g[2]:.4f} "
                    f"({ok.size}/{len(rows)} runs ok)")
    finally:
        if pool:
            pool.shutdown()

    with open(os.path.join(out_dir, "fits.csv"), "w") as fh:
        fh.write("\n".join([SWEEP_FIT_HEADER] + all_rows) + "\n")
    with open(os.path.join(out_dir, "summary.csv"), "w") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        fh.writelines(f"{a!r},{m:.17g},{lo:.17g},{hi:.17g}\n" for a, m, lo, hi in summary)
    return SweepResult(summary, all_rows, out_dir)


def parse_fit_rows(rows):
    """``(a, seed, slope, r2, error)`` tuples from fit CSV lines."""
    out = []
    for r in rows:
        f = r.split(",")
        out.append((float(f[0]), int(f[1]), float(f[2]), float(f[4]), f[7]))
    return out
