import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pagerank_lab import ParameterError
from pagerank_lab.graphgen import (PageGraph, aggregate_sites, attachment_probabilities,
                                   degree_density_exponent, degree_fractions, degree_rank_exponent,
                                   generate_page_graph, generate_page_graph_sequential,
                                   indegree_histogram, mean_field_degree_fractions,
                                   read_page_graph, write_page_graph)


def test_single_page_is_self_loop():
    g = generate_page_graph(1, 3.0, 5)
    assert g.target.tolist() == [0]
    assert indegree_histogram(g) == {1: 1}


def test_two_pages_forced():
    for seed in range(20):
        g = generate_page_graph(2, 0.5, seed)
        assert g.target.tolist() == [0, 0]
        assert indegree_histogram(g) == {0: 1, 2: 1}


def test_third_page_attachment_frequency():
    # [DERIVED] (2+1)/(2*2) = 3/4 toward page 0 at a=1; Monte Carlo over 1e5 seeds, 3 sigma
    n = 100_000
    hits = sum(generate_page_graph(3, 1.0, s).target[2] == 0 for s in range(n))
    sd = math.sqrt(0.75 * 0.25 / n)
    assert abs(hits / n - 0.75) <= 3 * sd


@pytest.mark.parametrize("a", [0.0, 0.277, 1.0, 30.0])
def test_pointer_jumping_matches_sequential(a):
    for seed in range(3):
        assert generate_page_graph(3000, a, seed) == generate_page_graph_sequential(3000, a, seed)


def test_determinism_and_seed_sensitivity():
    g1 = generate_page_graph(5000, 1.0, 7)
    g2 = generate_page_graph(5000, 1.0, 7)
    assert g1.target.tobytes() == g2.target.tobytes()
    assert g1 != generate_page_graph(5000, 1.0, 8)


@pytest.mark.parametrize("bad", [-0.1, math.inf, math.nan])
def test_rejects_bad_a(bad):
    with pytest.raises(ParameterError):
        generate_page_graph(10, bad, 0)


def test_rejects_zero_pages():
    with pytest.raises(ParameterError):
        generate_page_graph(0, 1.0, 0)


def test_page_graph_invariants_enforced():
    with pytest.raises(ParameterError):
        PageGraph(np.array([1, 0]), 1.0, 0)
    with pytest.raises(ParameterError):
        PageGraph(np.array([0, 1]), 1.0, 0)


@given(st.integers(0, 10**6), st.integers(1, 10**6), st.floats(0, 1e3, allow_nan=False))
def test_mixture_equals_attachment_law(indeg, n, a):
    beta = a / (1 + a)
    mix = beta / n + (1 - beta) * indeg / n
    assert math.isclose(mix, (indeg + a) / (n * (1 + a)), rel_tol=1e-12, abs_tol=1e-300)


@given(st.integers(1, 500), st.integers(0, 2**32), st.floats(0, 100, allow_nan=False))
def test_attachment_probabilities_normalized(n, seed, a):
    # in-degrees of a real n-page graph sum to n
    indeg = generate_page_graph(n, 1.0, seed).indegrees()
    assert math.isclose(attachment_probabilities(indeg, a).sum(), 1.0, rel_tol=1e-12)


def test_aggregate_identity_and_collapse():
    g = generate_page_graph(30, 1.0, 1)
    M = aggregate_sites(g, 1)
    assert M.m == 1 and M.nnz == 30
    assert np.array_equal(M.col_indices, g.target)
    one = aggregate_sites(g, 30)
    assert one.n_sites == 1 and one.numerators.tolist() == [30]


def brute_force_grouping(target, m):
    n_sites = len(target) // m
    rows = [dict() for _ in range(n_sites)]
    for i, t in enumerate(target):
        rows[i // m][t // m] = rows[i // m].get(t // m, 0) + 1
    return rows


def test_aggregate_hand_example():
    # [DERIVED] target=[0,0,1,0], m=2: site 0 -> 0 weight 1; site 1 -> 0 weight 1
    M = aggregate_sites(PageGraph(np.array([0, 0, 1, 0]), 1.0, 0), 2)
    assert M.to_dense().tolist() == [[1.0, 0.0], [1.0, 0.0]]
    assert brute_force_grouping([0, 0, 1, 0], 2) == [{0: 2}, {0: 2}]


@pytest.mark.parametrize("m", [1, 3, 10])
def test_aggregate_matches_brute_force(m):
    g = generate_page_graph(600, 0.277, 4)
    M = aggregate_sites(g, m)
    rows = brute_force_grouping(g.target.tolist(), m)
    for i, r in enumerate(rows):
        cols, nums = M.row(i)
        assert dict(zip(cols.tolist(), nums.tolist())) == r
    assert int(M.numerators.sum()) == g.n_pages


def test_aggregate_rejects():
    g = generate_page_graph(10, 1.0, 0)
    with pytest.raises(ParameterError):
        aggregate_sites(g, 3)
    with pytest.raises(ParameterError):
        aggregate_sites(g, 0)


def test_histogram_sums():
    g = generate_page_graph(4000, 5.0, 2)
    h = indegree_histogram(g)
    assert sum(h.values()) == 4000
    assert sum(k * c for k, c in h.items()) == 4000


def test_mean_field_closed_form_a1():
    # [DERIVED] telescoped recursion: c_k = 4/((k+1)(k+2)(k+3)) at a=1
    c = mean_field_degree_fractions(1.0, 50).c
    k = np.arange(51)
    assert np.allclose(c, 4.0 / ((k + 1) * (k + 2) * (k + 3)), rtol=1e-12)
    assert np.allclose(c[:3], [2 / 3, 1 / 6, 1 / 15], rtol=1e-12)
    assert abs(mean_field_degree_fractions(1.0, 1000).c.sum() - 1.0) <= 1e-5


@given(st.floats(0, 50, allow_nan=False))
def test_mean_field_c0_and_ratio(a):
    c = mean_field_degree_fractions(a, 20).c
    b = a / (1 + a)
    assert math.isclose(c[0], 1 / (1 + b), rel_tol=1e-12)
    k = np.arange(1, 21)
    assert np.allclose(c[1:], c[:-1] * (1 - (2 - b) / (1 + b + k * (1 - b))), rtol=1e-12, atol=0)
    assert np.all(c >= 0) and c.sum() <= 1 + 1e-12


def test_mean_field_rejects_negative():
    with pytest.raises(ParameterError):
        mean_field_degree_fractions(-1.0, 5)


@pytest.mark.parametrize("a", [0.277, 1.0, 5.0])
def test_empirical_fractions_near_mean_field(a):
    g = generate_page_graph(200_000, a, 13)
    emp = degree_fractions(g, 3)
    th = mean_field_degree_fractions(a, 3).c
    assert np.all(np.abs(emp - th) <= 0.01)


def test_density_exponent_a1():
    g = generate_page_graph(200_000, 1.0, 21)
    assert abs(degree_density_exponent(g) + 3.0) <= 0.15


def test_rank_exponent_reports_both_candidates():
    g = generate_page_graph(200_000, 1.0, 3)
    slope, cand = degree_rank_exponent(g)
    assert set(cand.values()) == {-1.5, -0.5}
    assert -1.0 < slope < -0.3


def test_page_graph_roundtrip(tmp_path):
    g = generate_page_graph(500, 0.277, 9)
    write_page_graph(g, tmp_path / "g.bopg")
    assert read_page_graph(tmp_path / "g.bopg") == g
