"""First-order methods: adaptive gradient descent and random coordinate descent."""
from dataclasses import dataclass, field
import math

import numpy as np

from .. import _rng
from .._errors import ConvergenceError, ParameterError


@dataclass
class OptimizerReport:
    iterations: int = 0
    function_evals: int = 0
    gradient_evals: int = 0
    final_gradient_norm: float = math.inf
    L_history: list = field(default_factory=list)
    F_history: list = field(default_factory=list)
    converged: bool = False
    trace: list = field(default_factory=list, repr=False)

    @property
    def evals_per_iteration(self):
        return self.function_evals / max(1, self.iterations)


TRACE_CSV_HEADER = "iter,F,grad_norm,L_k,evals"


def write_trace_csv(report, path):
    with open(path, "w") as fh:
        fh.write(TRACE_CSV_HEADER + "\n")
        for it, F, gn, L, ev in report.trace:
            fh.write(f"{it},{F!r},{gn!r},{L!r},{ev}\n")


def finite_diff_gradient(f, x, h=None):
    """Central differences ``(f(x + h e_i) - f(x - h e_i)) / 2h``.

    ``h`` defaults to ``1e-6 * (1 + ||x||)``.
    """
    x = np.array(x, dtype=np.float64)
    if h is None:
        h = 1e-6 * (1.0 + np.linalg.norm(x))
    if h <= 0:
        raise ParameterError("h must be positive")
    g = np.empty_like(x)
    for i in range(x.size):
        xi = x[i]
        x[i] = xi + h
        fp = f(x)
        x[i] = xi - h
        fm = f(x)
        x[i] = xi
        g[i] = (fp - fm) / (2.0 * h)
    return g


def adaptive_gd(oracle, x0, eps, inexactness=0.0, L0=1.0, max_iter=100_000,
                strict=True, max_doublings=200):
    """Gradient descent that adapts its step constant ``L``.

    ``oracle(x)`` returns ``(F, grad)``. Each iteration halves ``L``, then
    steps to ``x - grad / L`` and doubles ``L`` until

        F(x_new) <= F(x) + <g, x_new - x> + L/2 ||x_new - x||^2 + 2 * inexactness

    holds. ``inexactness`` is the oracle error bound; ``"auto"`` sets it to
    ``eps^2 / (32 L)`` at the current ``L``. With an exact oracle the run stops
    at ``||grad|| <= eps``, otherwise at ``||grad|| <= eps / 2``.
    """
    if eps <= 0 or L0 <= 0:
        raise ParameterError("eps and L0 must be positive")
    auto = inexactness == "auto"
    exact = not auto and inexactness == 0
    stop = eps if exact else eps / 2.0
    x = np.array(x0, dtype=np.float64)
    F, g = oracle(x)
    if not np.isfinite(F) or not np.all(np.isfinite(g)):
        raise ParameterError("objective is not finite at the starting point")
    rep = OptimizerReport(function_evals=1, gradient_evals=1)
    L = float(L0)
    gnorm = float(np.linalg.norm(g))
    rep.F_history.append(F)
    rep.trace.append((0, F, gnorm, L, 1))
    while gnorm > stop:
        if rep.iterations >= max_iter:
            rep.final_gradient_norm = gnorm
            if strict:
                raise ConvergenceError(f"adaptive_gd hit max_iter={max_iter}", x, rep)
            return x, rep
        L /= 2.0
        gg = gnorm * gnorm
        for _ in range(max_doublings):
            slack = 2.0 * (eps * eps / (32.0 * L) if auto else float(inexactness))
            x_new = x - g / L
            F_new, g_new = oracle(x_new)
            rep.function_evals += 1
            rep.gradient_evals += 1
            # <g, x_new - x> + L/2 ||x_new - x||^2 == -||g||^2 / (2L)
            if np.isfinite(F_new) and F_new <= F - gg / (2.0 * L) + slack:
                break
            L *= 2.0
        else:
            raise ConvergenceError("step constant kept doubling; objective not L-smooth here", x, rep)
        x, F, g = x_new, F_new, g_new
        gnorm = float(np.linalg.norm(g))
        rep.iterations += 1
        rep.L_history.append(L)
        rep.F_history.append(F)
        rep.trace.append((rep.iterations, F, gnorm, L, rep.function_evals))
    rep.final_gradient_norm = gnorm
    rep.converged = True
    return x, rep


def estimate_coordinate_lipschitz(partial, x0, h=1e-4):
    """Per-coordinate curvature from two difference quotients of ``partial``.

    Heuristic: ``max(|d_i(x+h e_i) - d_i(x)|, |d_i(x) - d_i(x-h e_i)|) / h``,
    floored at ``1e-12``.
    """
    x = np.array(x0, dtype=np.float64)
    L = np.empty_like(x)
    for i in range(x.size):
        base = partial(x, i)
        xi = x[i]
        x[i] = xi + h
        up = partial(x, i)
        x[i] = xi - h
        down = partial(x, i)
        x[i] = xi
        L[i] = max(abs(up - base), abs(base - down)) / h
    return np.maximum(L, 1e-12)


def coordinate_descent(partial, x0, eps, *, gradient, lipschitz=None, seed=0,
                       check_every=None, max_iter=1_000_000, on_update=None, strict=True):
    """Random coordinate descent with step ``1 / L_i``.

    Each iteration draws ``i`` uniformly (from a counter stream keyed by
    ``seed``) and sets ``x_i -= partial(x, i) / L_i``. The full gradient is
    checked only every ``check_every`` iterations (default ``d``), and once
    at the start. ``on_update(i, change)`` lets stateful oracles keep caches
    in sync with ``x``.
    """
    x = np.array(x0, dtype=np.float64)
    d = x.size
    L = estimate_coordinate_lipschitz(partial, x) if lipschitz is None else np.asarray(lipschitz, float)
    if L.shape != (d,) or np.any(L <= 0):
        raise ParameterError("need one positive Lipschitz constant per coordinate")
    check_every = d if check_every is None else int(check_every)
    key = _rng.derive_key(seed, _rng.STREAM_COORDINATE)
    rep = OptimizerReport(L_history=L.tolist())
    gnorm = float(np.linalg.norm(gradient(x)))
    rep.gradient_evals += 1
    rep.trace.append((0, math.nan, gnorm, float(L.mean()), 0))
    k = 0
    while gnorm > eps:
        if k >= max_iter:
            rep.final_gradient_norm = gnorm
            if strict:
                raise ConvergenceError(f"coordinate_descent hit max_iter={max_iter}", x, rep)
            return x, rep
        block = np.arange(k, k + check_every, dtype=np.uint64)
        coords = np.minimum((_rng.uniforms(key, block) * d).astype(np.int64), d - 1)
        for i in coords.tolist():
            change = -partial(x, i) / L[i]
            x[i] += change
            if on_update is not None:
                on_update(i, change)
        k += check_every
        rep.function_evals += check_every
        gnorm = float(np.linalg.norm(gradient(x)))
        rep.gradient_evals += 1
        rep.trace.append((k, math.nan, gnorm, float(L.mean()), rep.function_evals))
    rep.iterations = k
    rep.final_gradient_norm = gnorm
    rep.converged = True
    return x, rep


class QuadraticObjective:
    """``F(x) = 0.5 <x, S x> - <b, x>`` with multiply-add accounting.

    Two gradient paths are exposed. :meth:`oracle` and :meth:`gradient`
    recompute ``S x`` (``d^2`` multiply-adds). The coordinate path keeps
    ``S x`` cached: :meth:`track` primes it once, :meth:`move` updates it
    after a single-coordinate change (``d`` multiply-adds), and
    :meth:`partial` and :meth:`tracked_gradient` read it for free.
    """

    def __init__(self, S, b=None):
        self.S = np.asarray(S, dtype=np.float64)
        self.d = self.S.shape[0]
        self.b = np.zeros(self.d) if b is None else np.asarray(b, dtype=np.float64)
        self.madds = 0
        self._Sx = None

    def value(self, x):
        Sx = self.S @ x
        self.madds += self.d * self.d + 2 * self.d
        return 0.5 * float(x @ Sx) - float(self.b @ x)

    def gradient(self, x):
        self.madds += self.d * self.d
        return self.S @ x - self.b

    def oracle(self, x):
        Sx = self.S @ x
        self.madds += self.d * self.d + 2 * self.d
        return 0.5 * float(x @ Sx) - float(self.b @ x), Sx - self.b

    def track(self, x):
        self._Sx = self.S @ np.asarray(x, dtype=np.float64)
        self.madds += self.d * self.d

    def partial(self, x, i):
        return self._Sx[i] - self.b[i]

    def move(self, i, change):
        self._Sx += change * self.S[:, i]
        self.madds += self.d

    def tracked_gradient(self, x=None):
        return self._Sx - self.b

    @property
    def lipschitz(self):
        return float(np.linalg.eigvalsh(self.S)[-1])

    @property
    def coordinate_lipschitz(self):
        return np.diag(self.S).copy()


def bounded_entry_quadratic(d, seed=0):
    """Positive-definite ``S`` with every entry in ``[1, 2]``.

    ``S = 1 1^T + 0.5 G G^T / k + 0.5 diag(u)`` with ``G`` uniform on
    ``[0, 1]^(d x k)`` and ``u`` uniform on ``[0.5, 1]``: off-diagonal
    entries land in ``[1, 1.5]``, diagonal ones in ``[1, 2]``, and
    ``lambda_min >= 0.25`` while ``lambda_max >= d``.
    """
    rng = np.random.default_rng(_rng.derive_key(seed, _rng.STREAM_SYNTHETIC, d))
    k = 4 * d
    G = rng.uniform(0.0, 1.0, (d, k))
    u = rng.uniform(0.5, 1.0, d)
    return np.ones((d, d)) + 0.5 * (G @ G.T) / k + 0.5 * np.diag(u)
