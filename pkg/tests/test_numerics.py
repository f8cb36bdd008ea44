import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frobcat.numerics import (DEFAULT_TOL, NotIdempotent, Tolerance, approx_eq, perron_eigenvalue,
                              perron_vector, rank_factorize, round_to_int, solve_intertwiner_space)
from oracles import golden_ratio_by_polynomial


@pytest.mark.parametrize("a, b, expected", [
    (1.0, 1.0 + 1e-12, True),
    (1.0, 1.1, False),
    (0.0, 5e-10, True),
])
def test_approx_eq_examples(a, b, expected):
    assert approx_eq(a, b, DEFAULT_TOL) is expected


def test_tolerance_rejects_nonpositive():
    with pytest.raises(ValueError):
        Tolerance(abs_eps=0.0)
    with pytest.raises(ValueError):
        Tolerance(rank_eps=float("nan"))


def test_rank_factorize_examples():
    E, R, r = rank_factorize([[1, 0], [0, 0]])
    assert r == 1
    assert np.allclose(np.abs(E), [[1], [0]]) and np.allclose(np.abs(R), [[1, 0]])
    assert np.allclose(E @ R, [[1, 0], [0, 0]])
    E, R, r = rank_factorize(np.eye(3))
    assert r == 3 and np.allclose(E @ R, np.eye(3)) and np.allclose(R @ E, np.eye(3))
    P = np.full((2, 2), 0.5)
    E, R, r = rank_factorize(P)
    assert r == 1 and np.max(np.abs(E @ R - P)) < 1e-12


def test_rank_factorize_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        rank_factorize([[1, 1], [0, 0.5]])


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1))
def test_rank_factorize_random_oblique_projections(n, seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, n + 1))
    V = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    D = np.diag([1.0] * k + [0.0] * (n - k))
    P = V @ D @ np.linalg.inv(V)
    E, R, r = rank_factorize(P, Tolerance(abs_eps=1e-7))
    assert r == k
    assert np.max(np.abs(E @ R - P)) < 1e-7 * max(1, np.max(np.abs(P)))
    if r:
        assert np.max(np.abs(R @ E - np.eye(r))) < 1e-7


def test_solve_intertwiner_space_examples():
    assert len(solve_intertwiner_space(np.zeros((1, 3)))) == 3
    assert solve_intertwiner_space(np.eye(3)) == []
    basis = solve_intertwiner_space([[1, -1, 0]])
    assert len(basis) == 2
    for v in basis:
        assert abs(v[0] - v[1]) < 1e-12


def test_perron_examples():
    assert np.allclose(perron_vector([[1]]), [1])
    assert abs(perron_eigenvalue([[0, 1], [1, 1]]) - golden_ratio_by_polynomial()) < 1e-12
    assert abs(perron_eigenvalue([[0, 0, 1], [0, 0, 1], [1, 1, 0]]) - np.sqrt(2)) < 1e-12


def test_round_to_int():
    assert round_to_int(2.0000001) == 2
    with pytest.raises(ValueError):
        round_to_int(2.4)
