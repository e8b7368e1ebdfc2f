"""Web-graph generation, PageRank solvers, Monte Carlo estimation and power-law fits."""
from ._errors import ConvergenceError, FitError, ParameterError
from .graphgen import (PageGraph, aggregate_sites, degree_density_exponent, degree_fractions,
                       generate_page_graph, mean_field_degree_fractions, read_page_graph,
                       write_page_graph)
from .mcmc import (EnsembleSnapshot, WalkerState, bernoulli_log_likelihood, bernoulli_mle,
                   burn_in_steps, concentration_study, ensemble_snapshot,
                   explicit_bernoulli_bound, kl_bernoulli, required_sample_size, run_walker,
                   walker_step)
from .powerlaw import PowerLawFit, RankPlot, linear_fit, loglog_fit, rank_sort, summarize_ensemble
from .solvers import SolverReport, dense_stationary_oracle, polyak_tremba, power_iteration
from .sparse import (RankVector, StochasticMatrix, read_rank_csv, read_site_graph,
                     residual_l1, teleported_apply, transpose_apply, write_rank_csv,
                     write_site_graph)

__version__ = "0.1.0"
