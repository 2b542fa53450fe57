"""Gaussian elimination over F_b using the field's lookup tables.

Matrices are 2-D integer numpy arrays of field elements.
"""

from __future__ import annotations

import numpy as np

from .finite_field import FieldSpec


def rref(F: FieldSpec, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-D array")
    nrows, ncols = A.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(A[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            A[[row, piv]] = A[[piv, row]]
        A[row] = F.mul[F.inv[A[row, col]], A[row]]
        for r in range(nrows):
            if r != row and A[r, col]:
                A[r] = F.sub[A[r], F.mul[A[r, col], A[row]]]
        pivots.append(col)
        row += 1
    return A, pivots


def rank(F: FieldSpec, M) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: FieldSpec, M) -> np.ndarray:
    """Basis of {x : M x = 0} as the rows of a (dim, ncols) array."""
    A = np.asarray(M, dtype=np.int64)
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    R, pivots = rref(F, A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = F.neg[R[i, f]]
    return basis


def matvec(F: FieldSpec, M, x) -> np.ndarray:
    """M @ x over F_b."""
    M = np.asarray(M, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros(M.shape[0], dtype=np.int64)
    for c in range(M.shape[1]):
        acc = F.add[acc, F.mul[M[:, c], x[c]]]
    return acc


def in_rowspace(F: FieldSpec, rows, vec) -> bool:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(vec))
    return rank(F, np.vstack([rows, np.asarray(vec, dtype=np.int64)[None, :]])) == rank(F, rows)


def span(F: FieldSpec, basis) -> np.ndarray:
    """All b**dim linear combinations of the basis rows."""
    basis = np.asarray(basis, dtype=np.int64)
    dim, n = basis.shape if basis.size else (0, basis.shape[-1] if basis.ndim == 2 else 0)
    out = np.zeros((1, n), dtype=np.int64)
    for row in basis[:dim]:
        parts = [F.add[out, F.mul[mu, row][None, :]] for mu in range(F.b)]
        out = np.vstack(parts)
    return out
