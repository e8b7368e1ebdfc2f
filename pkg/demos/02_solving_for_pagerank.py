# Power iteration, iterate averaging and the dense oracle on the same site graph.
# Run: python demos/02_solving_for_pagerank.py
import numpy as np

from pagerank_lab.graphgen import aggregate_sites, generate_page_graph
from pagerank_lab.solvers import dense_stationary_oracle, polyak_tremba, power_iteration

M = aggregate_sites(generate_page_graph(1_000, 1.0, seed=3), 5)  # 200 sites

# %% power iteration stops once the step is small enough to certify ||p - v||_1 <= eps
p, rep = power_iteration(M, delta=0.15, eps=1e-10)
print(f"{rep.iterations} iterations, certified error {rep.final_residual:.2e}")
h = np.array(rep.history)
print("step ratios (never above 1 - delta = 0.85):", np.round(h[1:6] / h[:5], 3))

# %% the direct solve agrees
v = dense_stationary_oracle(M, 0.15)
print("l1 gap to the dense solve:", np.abs(p.values - v.values).sum())

# %% averaging the raw chain: no teleport, residual ~ C / T
for T in (10, 100, 1000, 10_000):
    _, r = polyak_tremba(M, T=T)
    print(f"T={T:>6}: residual {r.final_residual:.2e}, T * residual {T * r.final_residual:.3f}")

# %% the 2-cycle never converges, its average does
from pagerank_lab.sparse import StochasticMatrix  # noqa: E402

cyc = StochasticMatrix.from_dense([[0, 1], [1, 0]], 1)
for T in (1, 2, 3, 4):
    avg, r = polyak_tremba(cyc, np.array([1.0, 0.0]), T=T)
    print(T, avg.values, r.final_residual)
