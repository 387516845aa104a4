import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agcontracts.linalg import DimensionError, rank
from agcontracts.model import (
    Contract,
    build_assumptions,
    build_guarantees,
    build_system,
    build_x0,
    observability_index,
    observability_matrix,
    unit_gain,
)

A_CASE = [[1.0, 0.1], [-0.5, -0.05]]
B_CASE = [[0.0, 0.0], [0.5, 0.05]]


def test_case_study_system():
    s = build_system(A_CASE, B_CASE, np.eye(2), np.zeros((2, 2)), [0.0, -0.1])
    assert (s.n_x, s.n_d, s.n_y) == (2, 2, 2)
    assert s.obs_index == 1


def test_observability_examples():
    assert observability_index(np.zeros((1, 1)), np.zeros((1, 1))) == 1
    chain_A, chain_C = np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[1.0, 0.0]])
    ranks = [rank(observability_matrix(chain_A, chain_C, m)) for m in range(3)]
    assert ranks == [1, 2, 2]
    assert observability_index(chain_A, chain_C) == 2


def test_unit_gain():
    s = unit_gain(3)
    assert s.n_x == 1 and np.array_equal(s.D, np.eye(3))
    assert s.x0.contains([0.0], np.zeros(3)) and not s.x0.contains([0.1], np.zeros(3))


def test_validation_errors():
    with pytest.raises(DimensionError):
        build_system(A_CASE, [[0.0, 0.0]], np.eye(2), np.zeros((2, 2)))
    with pytest.raises(DimensionError):
        build_system(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), [[1.0]])
    with pytest.raises(DimensionError):
        build_assumptions([[1.0]], [[0.0]], [1.0, 2.0])
    with pytest.raises(DimensionError):
        build_x0([[1.0, 0.0]], [[0.0]], [0.0], n_x=2, n_d=2)


def test_case_study_triples():
    a = build_assumptions([[1, 0], [-1, 0], [0, 1], [0, -1]],
                          [[-1, -0.1], [1, 0.1], [0, -1], [0, 1]], [0, 0, 0.98, 0.98])
    assert a.n_rows == 4 and a.n_d == 2
    # leader at 30 m/s braking at the limit for one step
    assert np.all(a.residual([0.0, 30.0], [3.0, 30.0 - 0.98]) <= 1e-12)
    assert a.residual([0.0, 30.0], [3.0, 28.0]).max() > 0
    empty = build_guarantees(np.zeros((0, 4)), np.zeros((0, 4)), [])
    assert empty.n_rows == 0
    con = Contract(a, empty)
    assert con.n_d == 2 and con.n_y == 2


def test_contract_width_mismatch():
    a = build_assumptions([[1.0, 0.0]], [[0.0, 0.0]], [1.0])
    g = build_guarantees([[0.0]], [[1.0]], [1.0])  # narrower than the input
    with pytest.raises(DimensionError):
        Contract(a, g)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1), st.booleans())
def test_obs_index_matches_rank_sequence(n_x, n_y, seed, sparse):
    rng = np.random.default_rng(seed)
    A = rng.integers(-1, 2, (n_x, n_x)).astype(float) if sparse else rng.standard_normal((n_x, n_x))
    C = rng.integers(-1, 2, (n_y, n_x)).astype(float) if sparse else rng.standard_normal((n_y, n_x))
    s = build_system(A, np.zeros((n_x, 1)), C, np.zeros((n_y, 1)))
    assert s.obs_index == observability_index(A, C)
    assert 1 <= s.obs_index <= n_x
    ranks = [rank(observability_matrix(A, C, m)) for m in range(n_x + 1)]
    nu = s.obs_index
    if nu < n_x:
        assert ranks[nu - 1] == ranks[nu]
    assert all(ranks[m - 1] < ranks[m] for m in range(1, nu))
