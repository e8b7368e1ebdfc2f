import os
import sys

import numpy as np
import pytest
from hypothesis import settings

from pagerank_lab import StochasticMatrix, aggregate_sites, generate_page_graph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def site_graph(n_sites, a=1.0, m=5, seed=0):
    return aggregate_sites(generate_page_graph(n_sites * m, a, seed), m)


def dense_rows(P):
    """Exact ``StochasticMatrix`` for a small dense matrix of simple fractions."""
    P = np.asarray(P, dtype=np.float64)
    m = 1
    while not np.allclose(P * m, np.rint(P * m)):
        m += 1
    return StochasticMatrix.from_dense(np.rint(P * m).astype(int), m)


@pytest.fixture
def two_cycle():
    return StochasticMatrix.from_dense([[0, 1], [1, 0]], 1)


@pytest.fixture
def absorbing():
    # both rows jump to site 1
    return StochasticMatrix.from_dense([[0, 1], [0, 1]], 1)


@pytest.fixture
def graph50():
    return site_graph(50, a=1.0, m=5, seed=11)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
