"""Deterministic PageRank solvers: power iteration, iterate averaging, dense oracle."""
from dataclasses import dataclass, field
import time

import numpy as np

from ._errors import ConvergenceError, ParameterError
from .sparse import RankVector, residual_l1, teleported_apply, uniform

DENSE_LIMIT = 2000


@dataclass
class SolverReport:
    solver_name: str
    iterations: int
    final_residual: float
    target_epsilon: float
    wall_time: float
    n: int = 0
    delta: float = 0.0
    converged: bool = True
    history: list = field(default_factory=list, repr=False)

    def csv_row(self):
        return (f"{self.solver_name},{self.n},{self.delta!r},{self.target_epsilon!r},"
                f"{self.iterations},{self.final_residual!r},{self.wall_time:.6f}")


REPORT_CSV_HEADER = "solver,n,delta,epsilon,iterations,residual,seconds"


def power_iteration(M, delta=0.15, eps=1e-7, max_iter=10_000, p0=None):
    """Power iteration on the teleported chain.

    Stops after the first step whose l1 change ``D_t`` satisfies
    ``D_t <= eps * delta``. The map contracts l1 distances by ``1 - delta``,
    so the returned iterate is within ``D_t / delta <= eps`` of the
    stationary vector. ``report.history`` holds every ``D_t``;
    ``report.final_residual`` is the certified bound ``D_t / delta``.
    """
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta!r}")
    if eps <= 0:
        raise ParameterError("eps must be positive")
    p = uniform(M.n_sites) if p0 is None else np.array(p0, dtype=np.float64)
    start = time.perf_counter()
    history = []
    tol = eps * delta
    for t in range(1, max_iter + 1):
        nxt = teleported_apply(M, p, delta)
        diff = float(np.abs(nxt - p).sum())
        history.append(diff)
        p = nxt
        if diff <= tol:
            break
    report = SolverReport("mpi", t, history[-1] / delta, eps, time.perf_counter() - start,
                          n=M.n_sites, delta=delta, converged=history[-1] <= tol,
                          history=history)
    result = RankVector(p, "mpi", t, report.final_residual)
    if not report.converged:
        raise ConvergenceError(f"power iteration did not reach eps={eps} in {max_iter} steps",
                               result, report)
    return result, report


def polyak_tremba(M, p0=None, T=1000, delta=0.0, record=False):
    """Average of the first ``T`` iterates of ``p(t+1) = P^T p(t)``.

    Runs on the raw chain by default (``delta=0``); no aperiodicity is needed
    for the averaged residual to decay like ``1/T``. With ``record=True`` the
    report's history holds the residual of every running average, which
    costs one extra matrix application per step.
    """
    if int(T) != T or T < 1:
        raise ParameterError("T must be a positive integer")
    p = uniform(M.n_sites) if p0 is None else np.array(p0, dtype=np.float64)
    start = time.perf_counter()
    total = np.zeros(M.n_sites)
    history = []
    for t in range(1, int(T) + 1):
        p = teleported_apply(M, p, delta)
        total += p
        if record:
            history.append(_sum_residual(M, total, delta, t))
    avg = total / T
    res = history[-1] if record else _sum_residual(M, total, delta, T)
    report = SolverReport("polyak-tremba", int(T), res, float("nan"),
                          time.perf_counter() - start, n=M.n_sites, delta=delta,
                          history=history)
    return RankVector(avg, "polyak-tremba", int(T), res), report


def _sum_residual(M, total, delta, t):
    # Residual of total/t, computed on the undivided sum.
    return float(np.abs(teleported_apply(M, total, delta) - total).sum()) / t


def dense_stationary_oracle(M, delta=0.15):
    """Stationary vector of ``(1-delta) P + delta E`` by a dense direct solve.

    Solves ``(G^T - I) v = 0`` with one equation replaced by ``sum(v) = 1``
    through least squares on the stacked system, and rejects chains whose
    stationary vector is not unique (possible only at ``delta = 0``).
    """
    if not 0.0 <= delta <= 1.0:
        raise ParameterError(f"delta must lie in [0, 1], got {delta!r}")
    n = M.n_sites
    if n > DENSE_LIMIT:
        raise ParameterError(f"dense oracle limited to {DENSE_LIMIT} sites, got {n}")
    G = (1.0 - delta) * M.to_dense() + delta / n
    A = np.vstack([G.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    v, _, rank, sv = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < n or sv[-1] < 1e-10 * sv[0]:
        raise ParameterError("stationary distribution is not unique for this chain")
    v = np.clip(v, 0.0, None)
    v /= v.sum()
    return RankVector(v, "dense", 0, residual_l1(M, delta, v))


__all__ = ["SolverReport", "REPORT_CSV_HEADER", "power_iteration", "polyak_tremba",
           "dense_stationary_oracle"]
