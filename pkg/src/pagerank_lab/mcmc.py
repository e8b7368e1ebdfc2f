"""Random-walk PageRank estimates and the concentration toolkit around them.

A walker step teleports to a uniform site with probability ``delta`` and
otherwise samples its row by binary search over cumulative integer
numerators (exact rational sampling, O(log s) per step). Walker ``w`` of a
run draws from its own counter stream keyed by ``(seed, w)``, so results do
not depend on how walkers are spread over threads.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from . import _rng
from ._errors import ParameterError
from .sparse import RankVector


@njit(cache=True, inline="always")
def _start(key, n):
    return min(int(_rng.nb_uniform(key, np.uint64(0)) * n), n - 1)


@njit(cache=True)
def _step(pos, key, t, delta, n, m, offsets, cumulative, cols):
    # Step t (1-based) consumes counters 2t and 2t+1; counter 0 seeds the start.
    u0 = _rng.nb_uniform(key, np.uint64(2 * t))
    u1 = _rng.nb_uniform(key, np.uint64(2 * t + 1))
    if u0 < delta:
        return min(int(u1 * n), n - 1)
    target = pos * m + min(int(u1 * m), m - 1)
    lo = offsets[pos]
    hi = offsets[pos + 1] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cumulative[mid] > target:
            hi = mid
        else:
            lo = mid + 1
    return cols[lo]


@njit(cache=True)
def _walk_counts(key, T, delta, n, m, offsets, cumulative, cols, counts):
    pos = _start(key, n)
    for t in range(1, T + 1):
        pos = _step(pos, key, t, delta, n, m, offsets, cumulative, cols)
        counts[pos] += 1


@njit(cache=True, nogil=True)
def _ensemble_counts(base, w_lo, w_hi, T0, delta, n, m, offsets, cumulative, cols, counts):
    for w in range(w_lo, w_hi):
        key = _rng.nb_walker_key(base, w)
        pos = _start(key, n)
        for t in range(1, T0 + 1):
            pos = _step(pos, key, t, delta, n, m, offsets, cumulative, cols)
        counts[pos] += 1


def _kernel_args(M):
    return M.n_sites, M.m, M.row_offsets, M.cumulative, M.col_indices


def _check_delta(delta):
    if not 0.0 <= delta <= 1.0:
        raise ParameterError(f"delta must lie in [0, 1], got {delta!r}")
    return float(delta)


@dataclass(frozen=True)
class WalkerState:
    position: int
    steps_taken: int
    key: int

    @classmethod
    def start(cls, M, seed, walker=0):
        """Walker ``walker`` of the single-walker stream of ``seed``, at its uniform start."""
        key = _rng.derive_key(seed, _rng.STREAM_WALKER, walker)
        return cls(int(_start(np.uint64(key), M.n_sites)), 0, key)


def walker_step(M, delta, state):
    """Advance one step; the draw is fixed by ``(state.key, state.steps_taken)``."""
    delta = _check_delta(delta)
    if not 0 <= state.position < M.n_sites:
        raise ParameterError("walker position outside the matrix")
    t = state.steps_taken + 1
    pos = _step(state.position, np.uint64(state.key), t, delta, *_kernel_args(M))
    return WalkerState(int(pos), t, state.key)


def run_walker(M, delta, T, seed=0):
    """Visit frequencies of one walker over ``T`` steps (start not counted)."""
    delta = _check_delta(delta)
    if int(T) != T or T < 1:
        raise ParameterError("T must be a positive integer")
    key = _rng.derive_key(seed, _rng.STREAM_WALKER, 0)
    counts = np.zeros(M.n_sites, dtype=np.int64)
    _walk_counts(np.uint64(key), int(T), delta, *_kernel_args(M), counts)
    return RankVector(counts / T, "mcmc", int(T), seed=seed, meta={"counts": counts})


@dataclass(frozen=True)
class EnsembleSnapshot:
    counts: np.ndarray
    N: int
    T0: int
    seed: int

    @property
    def frequencies(self):
        return self.counts / self.N


def ensemble_snapshot(M, delta, N, T0, seed=0, lanes=1):
    """Positions of ``N`` independent walkers after ``T0`` steps each.

    ``lanes`` splits the walkers into contiguous blocks run on that many
    threads; the merged counts are identical for any lane count.
    """
    delta = _check_delta(delta)
    if int(N) != N or N < 1 or int(T0) != T0 or T0 < 1:
        raise ParameterError("N and T0 must be positive integers")
    N, T0 = int(N), int(T0)
    base = np.uint64(_rng.derive_key(seed, _rng.STREAM_ENSEMBLE))
    bounds = np.linspace(0, N, max(1, int(lanes)) + 1).astype(np.int64)
    args = _kernel_args(M)

    def lane(lo, hi):
        counts = np.zeros(M.n_sites, dtype=np.int64)
        _ensemble_counts(base, lo, hi, T0, delta, *args, counts)
        return counts

    if len(bounds) == 2:
        counts = lane(0, N)
    else:
        with ThreadPoolExecutor(len(bounds) - 1) as pool:
            counts = sum(pool.map(lane, bounds[:-1], bounds[1:]))
    return EnsembleSnapshot(counts, N, T0, int(seed))


def burn_in_steps(alpha, n, eps, C=1.0):
    """``ceil(C / alpha * ln(n / eps))`` steps, clipped below at zero."""
    if not 0 < alpha < 1:
        raise ParameterError("alpha must lie in (0, 1)")
    if n <= 0 or eps <= 0 or C <= 0:
        raise ParameterError("n, eps and C must be positive")
    return max(0, math.ceil(C / alpha * math.log(n / eps)))


def explicit_bernoulli_bound(N, sigma):
    """Half-width ``0.5 * sqrt(ln(2/sigma) / N)`` of the explicit two-sided bound."""
    return 0.5 * math.sqrt(math.log(2.0 / sigma) / N)


def required_sample_size(eps, sigma):
    """Smallest ``N`` with ``explicit_bernoulli_bound(N, sigma) <= eps``.

    Closed form ``ceil(ln(2/sigma) / (4 eps^2))``, then nudged by whole steps
    so the bound holds at ``N`` and fails at ``N - 1``. Comparisons carry a
    relative slack of 1e-12 so exact boundary cases are not lost to rounding.
    """
    if not 0 < eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    if not 0 < sigma < 1:
        raise ParameterError("sigma must lie in (0, 1)")

    def ok(N):
        return explicit_bernoulli_bound(N, sigma) <= eps * (1 + 1e-12)

    N = max(1, math.ceil(math.log(2.0 / sigma) / (4.0 * eps * eps)))
    while N > 1 and ok(N - 1):
        N -= 1
    while not ok(N):
        N += 1
    return N


def bernoulli_mle(r, N):
    """Maximum-likelihood success probability ``r / N``."""
    if N < 1 or not 0 <= r <= N:
        raise ParameterError("need N >= 1 and 0 <= r <= N")
    return r / N


def bernoulli_log_likelihood(nu, r, N):
    """``r ln nu + (N-r) ln(1-nu)`` with ``0 * ln 0 = 0``."""
    nu = np.asarray(nu, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(r > 0, r * np.log(nu), 0.0)
        b = np.where(N - r > 0, (N - r) * np.log1p(-nu), 0.0)
    return a + b


def _xlogy_ratio(x, y):
    return 0.0 if x == 0 else x * math.log(x / y)


def kl_bernoulli(p, q):
    """Bernoulli Kullback–Leibler divergence ``KL(p || q) >= 0``.

    Returns ``inf`` when ``q`` is 0 or 1 and ``p`` differs from it.
    """
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ParameterError("p and q must lie in [0, 1]")
    if q in (0.0, 1.0):
        return 0.0 if p == q else math.inf
    return max(0.0, _xlogy_ratio(p, q) + _xlogy_ratio(1.0 - p, 1.0 - q))


def write_snapshot_csv(snap, path):
    with open(path, "w") as fh:
        fh.write(f"# N={snap.N} T0={snap.T0} seed={snap.seed}\n")
        fh.write("site,count\n")
        fh.writelines(f"{i},{c}\n" for i, c in enumerate(snap.counts.tolist()))


def read_snapshot_csv(path):
    with open(path) as fh:
        meta = dict(kv.split("=") for kv in fh.readline().lstrip("# ").split())
        fh.readline()
        data = np.loadtxt(fh, delimiter=",", dtype=np.int64, ndmin=2)
    snap = EnsembleSnapshot(data[:, 1], int(meta["N"]), int(meta["T0"]), int(meta["seed"]))
    if snap.counts.sum() != snap.N:
        raise ParameterError(f"{path}: counts do not sum to N={snap.N}")
    return snap


def concentration_study(M, v, delta, N, T0, trials, seed=0, C=4.0, sigma=0.05):
    """Fraction of ensemble snapshots with ``||r/N - v||_2 <= C sqrt(ln(1/sigma)/N)``.

    Trial ``k`` uses seed ``derive_key(seed, k)``. Returns
    ``(fraction, errors, bound)``.
    """
    bound = C * math.sqrt(math.log(1.0 / sigma) / N)
    v = np.asarray(v, dtype=np.float64)
    errors = np.array([
        np.linalg.norm(ensemble_snapshot(M, delta, N, T0, _rng.derive_key(seed, k)).frequencies - v)
        for k in range(trials)
    ])
    return float(np.mean(errors <= bound)), errors, bound
