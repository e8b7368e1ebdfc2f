# Rank plots of PageRank on aggregated web graphs and the fitted exponent g(a).
# Run: python demos/04_pagerank_power_law.py  (writes into ./demo_out)
import os

from pagerank_lab.experiment import ExperimentConfig, experiment_sweep, single_run

# %% one run: sorted components against rank on log-log axes are close to a line
cfg = ExperimentConfig(a_values=[1.0], graphs_per_a=1)
seed, fit, plot = single_run(cfg, 1.0, 0)
print(f"g = {fit.slope:.4f}, r2 = {fit.r_squared:.4f} over ranks {fit.rank_window}")
print("top 5 sites:", plot.sites[:5], plot.values[:5])

# %% the sweep: 15 graphs per a, mean / min / max of g
out = os.environ.get("PAGERANK_LAB_OUT", "demo_out")
res = experiment_sweep(ExperimentConfig(), out, workers=os.cpu_count() or 1, log=print)

# %% the window matters: the head and the tail of the rank plot bend differently
for w in [(1, 100), (100, 5000)]:
    r = experiment_sweep(ExperimentConfig(graphs_per_a=5, window=w), os.path.join(out, f"w{w[0]}_{w[1]}"))
    print(w, [round(s[1], 3) for s in r.summary])
