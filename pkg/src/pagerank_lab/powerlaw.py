"""Rank plots and least-squares power-law fits of PageRank components."""
from dataclasses import dataclass

import numpy as np

from ._errors import FitError, ParameterError


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    degenerate: bool = False


def linear_fit(x, y):
    """Ordinary least squares ``y ~ slope * x + intercept`` with R^2.

    Constant ``y`` has no variance to explain; it is reported as a perfect
    fit (``r_squared = 1``) with ``degenerate=True``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 2 or x.shape != y.shape:
        raise FitError("need at least two paired points")
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = dx @ dx
    if sxx == 0:
        raise FitError("x values are all equal")
    slope = (dx @ dy) / sxx
    intercept = ym - slope * xm
    syy = dy @ dy
    if syy == 0:
        return LinearFit(slope, intercept, 1.0, True)
    resid = dy - slope * dx
    return LinearFit(slope, intercept, float(max(0.0, 1.0 - (resid @ resid) / syy)))


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    r_squared: float
    rank_window: tuple
    n_points: int
    degenerate: bool = False


@dataclass(frozen=True)
class RankPlot:
    ranks: np.ndarray
    values: np.ndarray
    sites: np.ndarray


def rank_sort(v):
    """Components sorted in descending order; ties keep ascending site order."""
    v = np.asarray(v, dtype=np.float64)
    sites = np.argsort(-v, kind="stable")
    return RankPlot(np.arange(1, v.size + 1), v[sites], sites)


def default_window(n):
    """Ranks ``[10, n // 10]``, trimming the hub head and the quantized tail."""
    return 10, max(12, n // 10)


def loglog_fit(sorted_values, window=None):
    """Fit ``ln v_k = g ln k + c`` over 1-based ranks ``lo..hi`` inclusive.

    Accepts either a :class:`RankPlot` or the descending values themselves.
    """
    if isinstance(sorted_values, RankPlot):
        sorted_values = sorted_values.values
    vals = np.asarray(sorted_values, dtype=np.float64)
    lo, hi = default_window(vals.size) if window is None else window
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi > vals.size or hi - lo + 1 < 3:
        raise ParameterError(f"window ({lo}, {hi}) invalid for {vals.size} values")
    seg = vals[lo - 1:hi]
    if np.any(seg <= 0):
        bad = lo + int(np.argmax(seg <= 0))
        raise FitError(f"nonpositive value at rank {bad}; cannot take its logarithm")
    k = np.arange(lo, hi + 1, dtype=np.float64)
    f = linear_fit(np.log(k), np.log(seg))
    return PowerLawFit(float(f.slope), float(f.intercept), float(f.r_squared),
                       (lo, hi), hi - lo + 1, f.degenerate)


def summarize_ensemble(fits):
    """``(mean, min, max)`` of the fitted slopes."""
    slopes = [f.slope if isinstance(f, PowerLawFit) else float(f) for f in fits]
    if not slopes:
        raise ParameterError("no fits to summarize")
    return float(np.mean(slopes)), float(min(slopes)), float(max(slopes))


def write_rank_plot(plot, path):
    with open(path, "w") as fh:
        fh.write("log2_k,log2_v\n")
        keep = plot.values > 0
        for k, v in zip(np.log2(plot.ranks[keep]).tolist(), np.log2(plot.values[keep]).tolist()):
            fh.write(f"{k:.17g},{v:.17g}\n")


FIT_CSV_HEADER = "a,seed,slope,intercept,r2,lo,hi"


def fit_csv_row(a, seed, fit):
    lo, hi = fit.rank_window
    return f"{a!r},{seed},{fit.slope:.17g},{fit.intercept:.17g},{fit.r_squared:.17g},{lo},{hi}"
