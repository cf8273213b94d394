"""Dense exact linear algebra over the prime field Z/p.

Matrices are numpy int64 arrays with entries reduced to [0, p).  Entries
stay far below 2**63 for the primes used here, so all arithmetic is exact.
"""

from __future__ import annotations

import numpy as np


def as_mod(a: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def inv_scalar(a: int, p: int) -> int:
    """Inverse of a nonzero scalar mod prime p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod %d" % p)
    return pow(a, p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a mod p; returns (R, pivot_columns)."""
    r = as_mod(a, p).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        best = row + int(nz[0])
        if best != row:
            r[[row, best]] = r[[best, row]]
        r[row] = (r[row] * inv_scalar(int(r[row, col]), p)) % p
        for other in range(rows):
            if other != row and r[other, col]:
                r[other] = (r[other] - r[other, col] * r[row]) % p
        pivots.append(col)
        row += 1
    return r, pivots


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical (RREF) basis of the row space of a."""
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64)
    r, pivots = rref(a, p)
    return r[: len(pivots)].copy()


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : a @ x = 0}, one solution per row, in RREF."""
    a = as_mod(a, p)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for prow, pc in enumerate(pivots):
            basis[i, pc] = (-int(r[prow, fc])) % p
    return row_basis(basis, p)


def reduce_vector(basis_rref: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Reduce v against an RREF row basis; result is 0 iff v is in the span."""
    v = as_mod(v, p).copy()
    for row in basis_rref:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        piv = int(nz[0])
        if v[piv]:
            v = (v - v[piv] * row) % p
    return v


def in_span(basis_rref: np.ndarray, v: np.ndarray, p: int) -> bool:
    return not np.any(reduce_vector(basis_rref, v, p))


def span_contains(basis_rref: np.ndarray, vectors: np.ndarray, p: int) -> bool:
    return all(in_span(basis_rref, v, p) for v in as_mod(vectors, p))


def span_sum(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[0] == 0:
        return row_basis(b, p)
    if b.shape[0] == 0:
        return row_basis(a, p)
    return row_basis(np.vstack([a, b]), p)


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a @ x = b mod p, or None if inconsistent."""
    a = as_mod(a, p)
    b = as_mod(b, p)
    rows, cols = a.shape
    aug = np.hstack([a, b.reshape(rows, 1)])
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for prow, pc in enumerate(pivots):
        x[pc] = r[prow, cols]
    return x
