import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtilt import fieldlin as fl


def mat(rows, p=2):
    return fl.as_mat(np.array(rows, dtype=np.int64).reshape(len(rows), -1), p)


def test_rank_empty_and_identity():
    assert fl.rank(fl.zeros(0, 0), 2) == 0
    assert fl.rank(fl.eye(3), 2) == 3


def test_rank_hand_elimination_mod2():
    assert fl.rank(mat([[1, 1], [1, 1]]), 2) == 1


def test_nullspace_identity_zero_and_row():
    assert fl.nullspace(fl.eye(4), 2).shape == (4, 0)
    assert fl.nullspace(fl.zeros(2, 3), 2).shape == (3, 3)
    ns = fl.nullspace(mat([[1, 1]]), 2)
    assert ns.shape == (2, 1)
    assert np.array_equal(ns[:, 0] % 2, np.array([1, 1]))


def test_in_span_basics():
    assert fl.in_span(fl.eye(3), np.array([1, 0, 1]), 2)
    assert not fl.in_span(fl.zeros(2, 0), np.array([1, 0]), 2)
    assert fl.in_span(fl.zeros(2, 0), np.array([0, 0]), 2)
    with pytest.raises(ValueError):
        fl.in_span(fl.eye(2), np.array([1, 0, 0]), 2)


def test_quotient_reps_is_representative_agnostic():
    w = mat([[1], [1]])
    reps = fl.quotient_reps(fl.eye(2), w, 2)
    assert reps.shape == (2, 1)
    # any vector completing span{(1,1)} to F_2^2 is acceptable
    assert fl.rank(np.hstack([w, reps]), 2) == 2


def test_quotient_reps_rejects_outside_span():
    with pytest.raises(ValueError):
        fl.quotient_reps(mat([[1], [0]]), mat([[0], [1]]), 2)


def test_solve_exact_or_none():
    a = mat([[1, 1], [0, 1]])
    b = np.array([[1], [1]])
    x = fl.solve(a, b, 2)
    assert np.array_equal((a @ x) % 2, b % 2)
    inconsistent = fl.solve(mat([[1, 1], [1, 1]]), np.array([[1], [0]]), 2)
    assert inconsistent is None


def test_subspace_enumeration_counts():
    # Gaussian binomial totals: F_2^2 has 5 subspaces, F_2^3 has 16, F_3^2 has 6
    assert sum(1 for _ in fl.all_subspaces(2, 2)) == 5
    assert sum(1 for _ in fl.all_subspaces(3, 2)) == 16
    assert sum(1 for _ in fl.all_subspaces(2, 3)) == 6


def test_intersect_spans():
    a = mat([[1, 0], [0, 1], [0, 0]])
    b = mat([[0, 0], [1, 0], [0, 1]])
    inter = fl.intersect_spans([a, b], 2)
    assert inter.shape[1] == 1
    assert fl.in_span(a, inter[:, 0], 2) and fl.in_span(b, inter[:, 0], 2)


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=0, max_value=5),
    st.integers(min_value=0, max_value=5),
    st.sampled_from([2, 3, 5]),
    st.data(),
)
def test_rank_nullity_random(rows, cols, p, data):
    entries = data.draw(
        st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols)
    )
    a = np.array(entries, dtype=np.int64).reshape(rows, cols)
    ns = fl.nullspace(a, p)
    assert fl.rank(a, p) + ns.shape[1] == cols
    if ns.size:
        assert not ((a @ ns) % p).any()


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=4), st.sampled_from([2, 3]), st.data())
def test_solve_by_substitution_random(n, p, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    rhs = data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
    a = np.array(entries, dtype=np.int64).reshape(n, n)
    b = np.array(rhs, dtype=np.int64).reshape(n, 1)
    x = fl.solve(a, b, p)
    if x is not None:
        assert np.array_equal((a @ x) % p, b % p)
    else:
        assert fl.rank(np.hstack([a, b]), p) > fl.rank(a, p)


def test_prime_checks():
    assert fl.is_prime(2) and fl.is_prime(13)
    assert not fl.is_prime(1) and not fl.is_prime(9)
    with pytest.raises(ValueError):
        fl.check_prime(6)
