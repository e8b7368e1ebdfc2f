# Growing a Buckley-Osthus page graph and checking its degree law.
# Run: python demos/01_growing_a_web_graph.py
import numpy as np

from pagerank_lab.graphgen import (aggregate_sites, degree_density_exponent, degree_fractions,
                                   degree_rank_exponent, generate_page_graph,
                                   mean_field_degree_fractions)

# %% one link per new page; a controls how "preferential" the attachment is
g = generate_page_graph(200_000, a=1.0, seed=1)
print(g.n_pages, "pages, beta =", g.beta)
print("first targets:", g.target[:12])

# %% small degrees against the mean-field fractions c_k = 4/((k+1)(k+2)(k+3)) at a=1
emp = degree_fractions(g, 5)
th = mean_field_degree_fractions(1.0, 5).c
for k in range(6):
    print(f"k={k}: empirical {emp[k]:.4f}  mean-field {th[k]:.4f}")

# %% tail exponent; the density decays like k^-(2+a), so large a runs out of high degrees sooner
for a, k_hi in ((0.277, 100), (1.0, 100), (5.0, 30)):
    ga = generate_page_graph(200_000, a, seed=2)
    e = degree_density_exponent(ga, 5, k_hi)
    print(f"a={a}: fitted density exponent {e:.3f} over k=5..{k_hi}, expected {-(2 + a):.3f}")

# %% sorted in-degrees against rank: which exponent shows up?
slope, cand = degree_rank_exponent(g)
print(f"rank slope {slope:.3f}; candidates {cand}")

# %% pages -> sites, m consecutive pages per site, parallel links merged
M = aggregate_sites(g, 10)
print(M, "max row length", int(np.diff(M.row_offsets).max()))
