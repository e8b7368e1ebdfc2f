# Estimating PageRank with walkers: one long walk versus many short ones.
# Run: python demos/03_random_walkers.py
import math

import numpy as np

from pagerank_lab.graphgen import aggregate_sites, generate_page_graph
from pagerank_lab.mcmc import (burn_in_steps, ensemble_snapshot, explicit_bernoulli_bound,
                               kl_bernoulli, required_sample_size, run_walker)
from pagerank_lab.solvers import dense_stationary_oracle

M = aggregate_sites(generate_page_graph(250, 1.0, seed=11), 5)  # 50 sites
v = dense_stationary_oracle(M, 0.15).values

# %% one walker, visit frequencies
for T in (10**4, 10**5, 10**6):
    est = run_walker(M, 0.15, T, seed=1)
    print(f"T={T:>8}: l2 error {np.linalg.norm(est.values - v):.4f}")

# %% N walkers, each stopped after the burn-in; same answer for any number of threads
T0 = burn_in_steps(0.15, M.n_sites, 1e-2)
snap = ensemble_snapshot(M, 0.15, 10_000, T0, seed=5, lanes=4)
err = np.linalg.norm(snap.frequencies - v)
print(f"T0={T0}, ensemble l2 error {err:.4f}, bound 4*sqrt(ln 20/N) = {4 * math.sqrt(math.log(20) / 1e4):.4f}")
assert np.array_equal(snap.counts, ensemble_snapshot(M, 0.15, 10_000, T0, seed=5).counts)

# %% how many walkers for +/-5% at 99% confidence on one site?
N = required_sample_size(0.05, 0.01)
print(N, explicit_bernoulli_bound(N, 0.01), explicit_bernoulli_bound(N - 1, 0.01))

# %% Pinsker: KL(p, q) >= 2 (p - q)^2
for p, q in [(0.1, 0.2), (0.5, 0.4), (0.0, 0.5)]:
    print(p, q, round(kl_bernoulli(p, q), 4), 2 * (p - q) ** 2)
