import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pagerank_lab import FitError, ParameterError
from pagerank_lab.powerlaw import (FIT_CSV_HEADER, default_window, fit_csv_row, linear_fit,
                                   loglog_fit, rank_sort, summarize_ensemble, write_rank_plot)


def test_rank_sort_examples():
    assert rank_sort([0.7, 0.1, 0.2]).sites.tolist() == [0, 2, 1]
    u = rank_sort(np.full(5, 0.2))
    assert u.sites.tolist() == [0, 1, 2, 3, 4] and u.ranks.tolist() == [1, 2, 3, 4, 5]


@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=50))
def test_rank_sort_is_permutation(v):
    r = rank_sort(v)
    assert sorted(r.values.tolist()) == sorted(v)
    assert np.all(np.diff(r.values) <= 0)
    assert np.array_equal(np.asarray(v)[r.sites], r.values)


def test_exact_power_law():
    k = np.arange(1, 101)
    f = loglog_fit(k ** -2.0, (1, 100))
    assert abs(f.slope + 2) <= 1e-9 and abs(f.r_squared - 1) <= 1e-9 and f.n_points == 100


def test_constant_values_degenerate():
    f = loglog_fit(np.full(20, 0.05), (1, 20))
    assert f.slope == 0 and f.r_squared == 1 and f.degenerate


def test_noisy_power_law():
    # [DERIVED] synthetic data with seeded noise
    rng = np.random.default_rng(0)
    k = np.arange(1, 1001)
    v = k ** -1.0 * (1 + 0.01 * rng.standard_normal(1000))
    assert abs(loglog_fit(v, (10, 1000)).slope + 1) <= 0.01


def test_linear_fit_vs_polyfit():
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=50), rng.normal(size=50)
    f = linear_fit(x, y)
    s, c = np.polyfit(x, y, 1)
    assert math.isclose(f.slope, s, rel_tol=1e-10) and math.isclose(f.intercept, c, rel_tol=1e-10)
    assert math.isclose(f.r_squared, np.corrcoef(x, y)[0, 1] ** 2, rel_tol=1e-10)


def test_fit_rejects_nonpositive():
    with pytest.raises(FitError, match="rank 4"):
        loglog_fit([0.5, 0.3, 0.2, 0.0, 0.0], (1, 5))


def test_fit_rejects_window():
    with pytest.raises(ParameterError):
        loglog_fit(np.ones(10), (1, 2))
    with pytest.raises(ParameterError):
        loglog_fit(np.ones(10), (0, 5))


@given(st.floats(1e-3, 1e3), st.integers(0, 2**32))
def test_slope_invariances(scale, seed):
    v = np.sort(np.random.default_rng(seed).pareto(2.0, 200) + 1e-3)[::-1]
    f = loglog_fit(v, (1, 200))
    assert abs(loglog_fit(scale * v, (1, 200)).slope - f.slope) <= 1e-12
    k = np.arange(1, 201)
    for log in (np.log2, np.log10):
        assert abs(linear_fit(log(k), log(v)).slope - f.slope) <= 1e-12


def test_sort_then_fit_equals_presorted():
    v = np.random.default_rng(5).dirichlet(np.ones(300) * 0.3)
    assert loglog_fit(rank_sort(v), (10, 30)) == loglog_fit(np.sort(v)[::-1], (10, 30))


def test_summaries():
    f = loglog_fit(np.arange(1, 21) ** -1.5, (1, 20))
    assert summarize_ensemble([f]) == (f.slope,) * 3
    assert summarize_ensemble([-1, -2, -3]) == (-2, -3, -1)
    with pytest.raises(ParameterError):
        summarize_ensemble([])


def test_default_window():
    assert default_window(10_000) == (10, 1000)


def test_outputs(tmp_path):
    plot = rank_sort([0.5, 0.25, 0.25, 0.0])
    write_rank_plot(plot, tmp_path / "p.csv")
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "log2_k,log2_v" and lines[1] == "0,-1" and len(lines) == 4
    f = loglog_fit(np.arange(1, 11) ** -1.0, (1, 10))
    assert len(fit_csv_row(1.0, 3, f).split(",")) == len(FIT_CSV_HEADER.split(","))
