import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jitqec import gf2


def random_matrix(seed, rows, cols):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)


def test_rank_identity():
    assert gf2.rank(np.eye(5, dtype=np.uint8)) == 5


def test_rank_dependent_rows():
    a = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    assert gf2.rank(a) == 2


def test_nullspace_orthogonal():
    a = random_matrix(3, 6, 10)
    ns = gf2.nullspace(a)
    assert ns.shape[0] == 10 - gf2.rank(a)
    assert not np.any(a @ ns.T % 2)


def test_in_rowspace():
    a = np.array([[1, 0, 1, 0], [0, 1, 1, 0]], dtype=np.uint8)
    assert gf2.in_rowspace(np.array([1, 1, 0, 0], dtype=np.uint8), a)
    assert not gf2.in_rowspace(np.array([0, 0, 0, 1], dtype=np.uint8), a)


@given(st.integers(0, 2 ** 31 - 1))
@settings(max_examples=25, deadline=None)
def test_solver_roundtrip(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(rng.integers(2, 12), rng.integers(2, 12)),
                     dtype=np.uint8)
    x = rng.integers(0, 2, size=a.shape[1], dtype=np.uint8)
    b = (a @ x) % 2
    solver = gf2.Solver(a)
    got = solver.solve(b)
    assert not np.any((a @ got) % 2 ^ b)


def test_solver_inconsistent():
    a = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    solver = gf2.Solver(a)
    with pytest.raises(ValueError):
        solver.solve(np.array([1, 0], dtype=np.uint8))
