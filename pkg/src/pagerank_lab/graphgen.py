"""Buckley–Osthus page graphs, site aggregation and degree statistics.

Page ``i >= 1`` emits a single link to an existing page ``j < i`` chosen with
probability ``(indeg(j) + a) / (i * (1 + a))``; page 0 links to itself.
Sampling uses the mixture form of that law: with probability
``beta = a / (1 + a)`` a uniform existing page, otherwise the head of a
uniformly chosen existing link (in-degree proportional sampling). The heads
of the existing links are exactly ``target[:i]``, so no weights are kept.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _rng
from ._errors import ParameterError
from .sparse import StochasticMatrix


@dataclass(frozen=True, eq=False)
class PageGraph:
    """Out-degree-one page graph; ``target[i]`` is the page that ``i`` links to."""

    target: np.ndarray
    a: float
    seed: int

    def __post_init__(self):
        t = np.ascontiguousarray(self.target, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "target", t)
        if t.ndim != 1 or t.size == 0:
            raise ParameterError("a page graph needs at least one page")
        if t[0] != 0:
            raise ParameterError("page 0 must carry the self-loop")
        if np.any(t[1:] < 0) or np.any(t[1:] >= np.arange(1, t.size)):
            raise ParameterError("page i may only link to pages 0..i-1")

    @property
    def n_pages(self):
        return int(self.target.size)

    @property
    def beta(self):
        return self.a / (1.0 + self.a)

    def indegrees(self):
        return np.bincount(self.target, minlength=self.n_pages)

    def __eq__(self, other):
        if not isinstance(other, PageGraph):
            return NotImplemented
        return (self.a == other.a and self.seed == other.seed
                and np.array_equal(self.target, other.target))


def _check_a(a):
    if not (isinstance(a, (int, float, np.floating, np.integer)) and math.isfinite(a)) or a < 0:
        raise ParameterError(f"attachment parameter a must be finite and >= 0, got {a!r}")
    return float(a)


def _draws(n_pages, a, seed):
    """Mixture coin and uniform index for every page (index 0 unused)."""
    key = _rng.derive_key(seed, _rng.STREAM_GRAPH)
    counters = np.arange(2 * n_pages, dtype=np.uint64)
    u = _rng.uniforms(key, counters).reshape(n_pages, 2)
    beta = a / (1.0 + a)
    uniform_pick = u[:, 0] < beta
    i = np.arange(n_pages, dtype=np.float64)
    idx = np.minimum(np.floor(u[:, 1] * i), np.maximum(i - 1, 0)).astype(np.int64)
    return uniform_pick, idx


def generate_page_graph(n_pages, a, seed=0):
    """Grow a Buckley–Osthus page graph of ``n_pages`` pages.

    The run is a pure function of ``(n_pages, a, seed)``. Preferential picks
    copy the head of an earlier link, which may itself be a copy; these
    chains are resolved with vectorized pointer jumping, giving the same
    result as the sequential loop in :func:`generate_page_graph_sequential`.
    """
    a = _check_a(a)
    if int(n_pages) != n_pages or n_pages < 1:
        raise ParameterError(f"n_pages must be a positive integer, got {n_pages!r}")
    n_pages = int(n_pages)
    uniform_pick, idx = _draws(n_pages, a, seed)

    target = np.where(uniform_pick, idx, -1)
    target[0] = 0
    done = target >= 0
    ptr = idx.copy()
    pending = np.flatnonzero(~done)
    while pending.size:
        p = ptr[pending]
        ready = done[p]
        hit = pending[ready]
        target[hit] = target[p[ready]]
        done[hit] = True
        pending = pending[~ready]
        ptr[pending] = ptr[p[~ready]]
    return PageGraph(target, a, int(seed))


def generate_page_graph_sequential(n_pages, a, seed=0):
    """Step-by-step reference generator (slow; used to cross-check)."""
    a = _check_a(a)
    uniform_pick, idx = _draws(int(n_pages), a, seed)
    target = [0]
    for i in range(1, int(n_pages)):
        target.append(int(idx[i]) if uniform_pick[i] else target[int(idx[i])])
    return PageGraph(np.array(target), a, int(seed))


def attachment_probabilities(indeg, a):
    """Exact law of the next link's head given current in-degrees."""
    indeg = np.asarray(indeg, dtype=np.float64)
    n = indeg.size
    return (indeg + a) / (n * (1.0 + a))


def aggregate_sites(g, m):
    """Group pages ``k*m .. (k+1)*m - 1`` into site ``k``.

    Parallel page links between a pair of sites merge into one entry with
    numerator equal to their multiplicity over the shared denominator ``m``.
    """
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    if g.n_pages % m:
        raise ParameterError(f"n_pages={g.n_pages} is not divisible by m={m}")
    n_sites = g.n_pages // m
    src = np.arange(g.n_pages, dtype=np.int64) // m
    dst = g.target // m
    keys, counts = np.unique(src * n_sites + dst, return_counts=True)
    rows, cols = np.divmod(keys, n_sites)
    offsets = np.zeros(n_sites + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n_sites), out=offsets[1:])
    return StochasticMatrix(n_sites, offsets, cols, counts, m)


def indegree_histogram(g):
    """Map in-degree -> number of pages with that in-degree."""
    counts = np.bincount(g.indegrees())
    return {int(k): int(c) for k, c in enumerate(counts) if c}


def degree_fractions(g, k_max):
    """Empirical fraction of pages with in-degree k, for k = 0..k_max."""
    counts = np.bincount(g.indegrees(), minlength=k_max + 1)[: k_max + 1]
    return counts / g.n_pages


@dataclass(frozen=True)
class DegreeFractions:
    c: np.ndarray
    a: float

    @property
    def beta(self):
        return self.a / (1.0 + self.a)


def mean_field_degree_fractions(a, k_max):
    """Stationary solution ``c_k`` of the mean-field degree recursion.

    ``c_0 = 1/(1+beta)`` and
    ``c_k / c_{k-1} = 1 - (2-beta) / (1+beta + k(1-beta))``.
    """
    a = _check_a(a)
    if k_max < 0:
        raise ParameterError("k_max must be >= 0")
    beta = a / (1.0 + a)
    k = np.arange(1, int(k_max) + 1, dtype=np.float64)
    ratios = 1.0 - (2.0 - beta) / (1.0 + beta + k * (1.0 - beta))
    c = np.empty(int(k_max) + 1)
    c[0] = 1.0 / (1.0 + beta)
    c[1:] = c[0] * np.cumprod(ratios)
    return DegreeFractions(c, a)


def degree_tail_shift(a):
    """Offset ``s`` with ``P(indeg >= k) ~ (k + s)^-(1+a)`` in the mean-field law.

    The recursion solves to ``c_k ∝ Γ(k+a) / Γ(k+2+2a)``, whose tail sum is
    ``∝ Γ(k+a) / Γ(k+1+2a) ≈ (k + 3a/2)^-(1+a)``.
    """
    return 1.5 * float(a)


def degree_density_exponent(g, k_lo=5, k_hi=100, shift=None):
    """Least-squares exponent of the in-degree density over ``[k_lo, k_hi]``.

    Fits the log of the empirical tail fraction ``P(indeg >= k)`` against
    ``log(k + shift)``; the density exponent is that slope minus one. The
    tail is used because per-degree counts hit zero in the sparse upper
    range. ``shift`` defaults to :func:`degree_tail_shift`; pass 0 for a
    plain ``log k`` axis.
    """
    from .powerlaw import linear_fit

    if shift is None:
        shift = degree_tail_shift(g.a)
    counts = np.bincount(g.indegrees())
    tail = np.cumsum(counts[::-1])[::-1] / g.n_pages
    if k_hi >= tail.size:
        raise ParameterError(f"no pages with in-degree >= {k_hi}")
    k = np.arange(k_lo, k_hi + 1)
    fit = linear_fit(np.log(k + shift), np.log(tail[k_lo:k_hi + 1]))
    return fit.slope - 1.0


def degree_rank_exponent(g, lo=10, hi=None):
    """Fitted slope of sorted in-degrees versus rank on log-log axes.

    Returns ``(slope, candidates)`` where ``candidates`` holds the two
    exponents the rank law can be read as, ``-(1+beta)`` and ``-(1-beta)``.
    """
    from .powerlaw import linear_fit

    deg = np.sort(g.indegrees())[::-1]
    if hi is None:
        hi = int(np.count_nonzero(deg >= 2))
    r = np.arange(lo, hi + 1)
    fit = linear_fit(np.log(r), np.log(deg[lo - 1:hi].astype(np.float64)))
    b = g.beta
    return fit.slope, {"-(1+beta)": -(1.0 + b), "-(1-beta)": -(1.0 - b)}


def write_page_graph(g, path):
    with open(path, "w") as fh:
        fh.write(f"BOPG 1 {g.n_pages} {g.a!r} {g.seed}\n")
        fh.writelines(f"{i} {t}\n" for i, t in enumerate(g.target.tolist()))


def read_page_graph(path):
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 5 or header[:2] != ["BOPG", "1"]:
            raise ParameterError(f"{path}: not a BOPG 1 page-graph file")
        n, a, seed = int(header[2]), float(header[3]), int(header[4])
        data = np.loadtxt(fh, dtype=np.int64, ndmin=2)
    if data.shape != (n, 2) or not np.array_equal(data[:, 0], np.arange(n)):
        raise ParameterError(f"{path}: expected {n} lines 'i target[i]' in page order")
    return PageGraph(data[:, 1], a, seed)


__all__ = [
    "PageGraph", "DegreeFractions", "generate_page_graph",
    "generate_page_graph_sequential", "attachment_probabilities",
    "aggregate_sites", "indegree_histogram", "degree_fractions",
    "mean_field_degree_fractions", "degree_tail_shift",
    "degree_density_exponent", "degree_rank_exponent",
    "write_page_graph", "read_page_graph",
]
