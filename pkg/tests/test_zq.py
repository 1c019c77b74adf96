"""Modular linear algebra against brute-force oracles."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticefilter.errors import BadParameter, CompositeModulus
from latticefilter.zq import (
    Modulus,
    ZqMatrix,
    ZqVector,
    centered,
    is_prime,
    kernel_basis,
    rank,
    rref,
    solve_linear_system,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def brute_solutions(A, b, q):
    """Every x with Ax = b mod q, by exhaustion. Oracle for the solvers."""
    n = A.shape[1]
    grid = np.indices((q,) * n).reshape(n, -1).T
    hits = grid[np.all((grid @ A.T) % q == np.asarray(b) % q, axis=1)]
    return {tuple(row) for row in hits}


def test_is_prime_small():
    known = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101}
    assert {q for q in range(2, 102) if is_prime(q)} == known


def test_modulus_require_prime():
    Modulus(7).require_prime()
    with pytest.raises(CompositeModulus):
        Modulus(6).require_prime()
    with pytest.raises(BadParameter):
        Modulus(1)


def test_centered_range_and_roundtrip():
    q = 11
    xs = np.arange(q)
    c = centered(xs, q)
    assert c.min() == -(q // 2) and c.max() == q // 2
    assert np.array_equal(c % q, xs)


@pytest.mark.parametrize("q", PRIMES)
@pytest.mark.parametrize("trial", range(4))
def test_solve_matches_brute_force(q, trial):
    rng = np.random.default_rng(1000 * q + trial)
    rows, n = int(rng.integers(1, 5)), int(rng.integers(1, 4))
    if q**n > 2000:
        n = 2
    A = rng.integers(0, q, size=(rows, n))
    b = rng.integers(0, q, size=rows)
    truth = brute_solutions(A, b, q)
    sol = solve_linear_system(A, b, q)
    if not truth:
        assert sol.status == "no_solution"
    elif len(truth) == 1:
        assert sol.status == "unique"
        assert tuple(sol.x % q) == next(iter(truth))
    else:
        assert sol.status == "underdetermined"


@pytest.mark.parametrize("q", [3, 5, 7])
def test_kernel_basis_spans_brute_kernel(q):
    rng = np.random.default_rng(q)
    A = rng.integers(0, q, size=(2, 3))
    truth = brute_solutions(A, np.zeros(2, dtype=int), q)
    basis = kernel_basis(A, q)  # columns are basis vectors
    if basis.size:
        assert not np.any((A @ basis) % q)
    d = basis.shape[1]
    coeffs = np.indices((q,) * d).reshape(d, -1).T if d else np.zeros((1, 0), dtype=int)
    spanned = {tuple(v % q) for v in coeffs @ basis.T}
    assert spanned == truth
    assert len(truth) == q ** (3 - rank(A, q))


def test_rref_pivots_are_canonical():
    A = np.array([[2, 4, 1], [1, 2, 3]])
    R, pivots = rref(A, 5)
    for r, c in enumerate(pivots):
        assert R[r, c] == 1
        col = R[:, c].copy()
        col[r] = 0
        assert not col.any()


def test_rref_rejects_composite_modulus():
    with pytest.raises(CompositeModulus):
        rref(np.eye(2, dtype=int), 4)


def test_zq_vector_ops():
    v = ZqVector(np.array([3, 9]), Modulus(7))
    w = ZqVector(np.array([6, 5]), Modulus(7))
    assert np.array_equal((v + w).data, [2, 0])
    assert np.array_equal((-v).data, [4, 5])
    assert v.dot(w) == (3 * 6 + 2 * 5) % 7
    M = ZqMatrix(np.array([[1, 2], [0, 3]]), Modulus(7))
    assert np.array_equal(M.matvec(v).data, [(3 + 2 * 2) % 7, (3 * 2) % 7])
    with pytest.raises(BadParameter):
        ZqVector(np.array([[1, 2]]), Modulus(7))


@settings(max_examples=60, deadline=None)
@given(
    q=st.sampled_from([2, 3, 5, 7, 11]),
    seed=st.integers(0, 2**31 - 1),
    rows=st.integers(1, 5),
    cols=st.integers(1, 5),
)
def test_solution_property(q, seed, rows, cols):
    # A @ solve(A, A x) == A x, and rank-nullity holds
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, size=(rows, cols))
    x = rng.integers(0, q, size=cols)
    b = (A @ x) % q
    sol = solve_linear_system(A, b, q)
    assert sol.status in ("unique", "underdetermined")
    if sol.status == "unique":
        assert np.array_equal((A @ sol.x) % q, b)
    assert rank(A, q) + kernel_basis(A, q).shape[1] == cols
