"""Exact mod-p linear algebra: every routine must be exact over GF(p)."""

import numpy as np
import pytest

from loopalg import linalg

PRIMES = (2, 3, 5, 7)


def _random_matrix(rng, rows, cols, p):
    return rng.integers(0, p, size=(rows, cols)).astype(np.int64)


@pytest.mark.parametrize("p", PRIMES)
def test_rref_is_idempotent_and_pivots_are_unit_columns(p):
    rng = np.random.default_rng(12345 + p)
    for _ in range(25):
        a = _random_matrix(rng, rng.integers(1, 7), rng.integers(1, 7), p)
        r, pivots = linalg.rref(a, p)
        r2, pivots2 = linalg.rref(r, p)
        assert np.array_equal(r, r2)
        assert pivots == pivots2
        for i, c in enumerate(pivots):
            col = r[:, c] % p
            assert col[i] == 1
            assert np.count_nonzero(col) == 1


@pytest.mark.parametrize("p", PRIMES)
def test_rank_agrees_with_rational_rank_on_generic_integer_matrices(p):
    # Multiples of the identity have full rank unless p divides the scalar.
    eye = np.eye(4, dtype=np.int64)
    assert linalg.rank(3 * eye, p) == (0 if p == 3 else 4)
    assert linalg.rank(np.zeros((3, 5), dtype=np.int64), p) == 0


@pytest.mark.parametrize("p", PRIMES)
def test_nullspace_vectors_annihilate_and_have_complementary_rank(p):
    rng = np.random.default_rng(999 + p)
    for _ in range(25):
        a = _random_matrix(rng, rng.integers(1, 6), rng.integers(1, 6), p)
        ns = linalg.nullspace(a, p)
        if ns.size:
            assert not ((a @ ns.T) % p).any()
        assert linalg.rank(a, p) + ns.shape[0] == a.shape[1]


@pytest.mark.parametrize("p", PRIMES)
def test_solve_roundtrip_and_unsolvable_returns_none(p):
    rng = np.random.default_rng(777 + p)
    for _ in range(25):
        a = _random_matrix(rng, rng.integers(1, 6), rng.integers(1, 6), p)
        x_true = rng.integers(0, p, size=a.shape[1]).astype(np.int64)
        b = (a @ x_true) % p
        x = linalg.solve(a, b, p)
        assert x is not None
        assert np.array_equal((a @ x) % p, b)
    # b outside the column space must be reported, not approximated.
    a = np.array([[1, 0], [0, 0]], dtype=np.int64)
    assert linalg.solve(a, np.array([0, 1], dtype=np.int64), p) is None


@pytest.mark.parametrize("p", PRIMES)
def test_span_operations_are_consistent(p):
    rng = np.random.default_rng(555 + p)
    for _ in range(20):
        a = _random_matrix(rng, 4, 5, p)
        basis = linalg.row_basis(a, p)
        # Every original row lies in the span of the reduced basis.
        assert linalg.span_contains(basis, a, p)
        combo = (rng.integers(0, p, size=basis.shape[0]).astype(np.int64) @ basis) % p
        assert linalg.in_span(basis, combo, p)
        assert not linalg.reduce_vector(basis, combo, p).any()
        joined = linalg.span_sum(basis, a, p)
        assert joined.shape[0] == basis.shape[0]


@pytest.mark.parametrize("p", PRIMES)
def test_reduce_vector_is_a_canonical_form_modulo_the_span(p):
    rng = np.random.default_rng(333 + p)
    basis = linalg.row_basis(_random_matrix(rng, 3, 6, p), p)
    v = rng.integers(0, p, size=6).astype(np.int64)
    w = (v + (rng.integers(0, p, size=basis.shape[0]).astype(np.int64) @ basis)) % p
    assert np.array_equal(
        linalg.reduce_vector(basis, v, p), linalg.reduce_vector(basis, w, p)
    )


def test_inv_scalar_inverts_all_units():
    for p in PRIMES:
        for a in range(1, p):
            assert (a * linalg.inv_scalar(a, p)) % p == 1
