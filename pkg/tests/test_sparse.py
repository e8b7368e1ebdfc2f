import numpy as np
import pytest
from hypothesis import given, strategies as st

from pagerank_lab import ParameterError, StochasticMatrix
from pagerank_lab.sparse import (RankVector, read_rank_csv, read_site_graph, residual_l1,
                                 teleported_apply, transpose_apply, uniform, write_rank_csv,
                                 write_site_graph)
from conftest import site_graph


def test_identity_apply():
    I = StochasticMatrix.from_dense(np.eye(4, dtype=int), 1)
    p = np.array([0.1, 0.2, 0.3, 0.4])
    assert np.array_equal(transpose_apply(I, p), p)


def test_permutation_apply(two_cycle):
    assert transpose_apply(two_cycle, [1.0, 0.0]).tolist() == [0.0, 1.0]


def test_transpose_apply_vs_dense():
    # [DERIVED] dense oracle built from the same entries
    M = site_graph(20, 1.0, 5, 3)
    p = np.random.default_rng(0).dirichlet(np.ones(20))
    assert np.max(np.abs(transpose_apply(M, p) - M.to_dense().T @ p)) <= 1e-12


def test_teleported_hand_value(absorbing):
    # [DERIVED] 0.85 * (0, 1) + 0.15 / 2 = (0.075, 0.925)
    assert np.allclose(teleported_apply(absorbing, [1.0, 0.0], 0.15), [0.075, 0.925], atol=1e-15)


def test_full_teleport_is_uniform(absorbing):
    assert teleported_apply(absorbing, [1.0, 0.0], 1.0).tolist() == [0.5, 0.5]


def test_doubly_stochastic_fixes_uniform(two_cycle):
    assert np.allclose(teleported_apply(two_cycle, uniform(2), 0.3), uniform(2))


def test_teleported_rejects_delta():
    M = site_graph(5)
    with pytest.raises(ParameterError):
        teleported_apply(M, uniform(5), 1.5)


def test_dimension_mismatch():
    with pytest.raises(ParameterError):
        transpose_apply(site_graph(5), np.ones(4) / 4)


def test_residual_two_cycle(two_cycle):
    assert residual_l1(two_cycle, 0.0, [1.0, 0.0]) == 2.0
    assert residual_l1(two_cycle, 0.0, [0.5, 0.5]) == 0.0


def test_residual_vs_dense():
    M = site_graph(30, 0.277, 2, 5)
    G = 0.85 * M.to_dense() + 0.15 / 30
    u = uniform(30)
    assert abs(residual_l1(M, 0.15, u) - np.abs(G.T @ u - u).sum()) <= 1e-12


@pytest.mark.parametrize("bad", [
    dict(n_sites=2, row_offsets=[0, 1, 1], col_indices=[0], numerators=[1], m=1),  # empty row
    dict(n_sites=1, row_offsets=[0, 2], col_indices=[0, 0], numerators=[1, 1], m=2),  # repeat col
    dict(n_sites=1, row_offsets=[0, 1], col_indices=[0], numerators=[2], m=3),  # sum != m
    dict(n_sites=1, row_offsets=[0, 2], col_indices=[0, 1], numerators=[3, 0], m=3),  # zero entry
    dict(n_sites=1, row_offsets=[0, 1], col_indices=[1], numerators=[1], m=1),  # col out of range
])
def test_invariants_rejected(bad):
    with pytest.raises(ParameterError):
        StochasticMatrix(**bad)


@given(st.integers(1, 60), st.sampled_from([1, 2, 5]), st.floats(0, 10), st.integers(0, 2**32))
def test_rows_sum_to_m_exactly(n_sites, m, a, seed):
    M = site_graph(n_sites, a, m, seed)
    assert np.all(np.add.reduceat(M.numerators, M.row_offsets[:-1]) == M.m)
    assert M.numerators.dtype.kind == "i"


@given(st.integers(2, 40), st.integers(0, 2**32), st.floats(0, 1))
def test_apply_preserves_simplex(n_sites, seed, delta):
    M = site_graph(n_sites, 1.0, 3, seed)
    p = np.random.default_rng(seed).dirichlet(np.ones(n_sites))
    q = teleported_apply(M, p, delta)
    assert np.all(q >= 0)
    assert abs(q.sum() - 1.0) <= 1e-12


def test_site_graph_roundtrip(tmp_path):
    M = site_graph(40, 5.0, 5, 2)
    write_site_graph(M, tmp_path / "s.bosg")
    assert read_site_graph(tmp_path / "s.bosg") == M


def test_rank_csv_roundtrip(tmp_path):
    p = np.random.default_rng(1).dirichlet(np.ones(25))
    write_rank_csv(RankVector(p), tmp_path / "r.csv")
    assert np.array_equal(read_rank_csv(tmp_path / "r.csv").values, p)
    assert (tmp_path / "r.csv").read_text().splitlines()[0] == "site,score"


def test_matrix_is_immutable():
    M = site_graph(5)
    with pytest.raises(ValueError):
        M.numerators[0] = 7
