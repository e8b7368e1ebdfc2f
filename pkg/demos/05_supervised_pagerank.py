# Learning transition and teleport weights from graded nodes.
# Run: python demos/05_supervised_pagerank.py
import numpy as np

from pagerank_lab import _rng
from pagerank_lab.learn import (QuadraticObjective, adaptive_gd, bounded_entry_quadratic,
                                coordinate_descent, finite_diff_gradient, objective,
                                objective_and_gradient, scenario_select, synthetic_query)

rng = np.random.default_rng(0)
x_true = rng.normal(size=10)  # l = 5 features for edges, 5 for nodes
queries = [synthetic_query(30, 5, x_true, _rng.derive_key(0, k), T=50) for k in range(5)]

# %% backprop through the 50 unrolled steps versus finite differences
x = rng.normal(size=10)
F, g = objective_and_gradient(queries, x)
fd = finite_diff_gradient(lambda z: objective(queries, z), x)
print(f"F = {F:.5f}, relative gradient gap {np.linalg.norm(g - fd) / np.linalg.norm(fd):.1e}")

# %% adaptive gradient descent: halve L, double until the decrease test passes
x_hat, rep = adaptive_gd(lambda z: objective_and_gradient(queries, z), np.zeros(10), 1e-6)
print(f"{rep.iterations} iterations, {rep.evals_per_iteration:.2f} evaluations each, "
      f"F {rep.F_history[0]:.4f} -> {rep.F_history[-1]:.6f}")

# %% a quadratic with entries in [1, 2]: L is about d, the diagonal about 1.5
d = 50
S = bounded_entry_quadratic(d)
Q = QuadraticObjective(S, np.ones(d))
print(f"L = {Q.lipschitz:.1f}, mean L_i = {np.diag(S).mean():.2f}")
Q.track(np.zeros(d))
start = Q.madds
_, cd = coordinate_descent(Q.partial, np.zeros(d), 1e-6, gradient=Q.tracked_gradient,
                           lipschitz=Q.coordinate_lipschitz, on_update=Q.move)
print(f"coordinate descent: {cd.iterations} steps at {(Q.madds - start) / cd.iterations:.0f} "
      f"multiply-adds, versus {d * d} for one full gradient")

# %% choosing between feature sets on held-out queries
true = lambda s: synthetic_query(20, 3, x_true[:6], s, T=30)  # noqa: E731
noise = lambda s: synthetic_query(20, 3, x_true[:6], s, T=30, noise_features=True)  # noqa: E731
best, scores = scenario_select([1, 2, 3], [4, 5], [true, noise], eps=1e-4)
print("picked scenario", best, "test losses", np.round(scores, 5))
