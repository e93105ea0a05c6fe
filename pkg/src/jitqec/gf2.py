"""Dense GF(2) linear algebra on uint8 numpy arrays.

Matrices hold 0/1 entries; all arithmetic is mod 2. Sizes here are small
(hundreds of rows/columns), so dense elimination is fast enough and keeps
the code simple.
"""

from __future__ import annotations

import numpy as np


def row_reduce(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Return (reduced row echelon form, pivot column list)."""
    a = np.array(mat, dtype=np.uint8, copy=True) % 2
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat: np.ndarray) -> int:
    if mat.size == 0:
        return 0
    return row_reduce(mat)[0].shape[0]


def in_rowspace(vec: np.ndarray, mat: np.ndarray) -> bool:
    """True if vec is a GF(2) combination of the rows of mat."""
    if mat.size == 0:
        return not np.any(vec % 2)
    stacked = np.vstack([mat, vec])
    return rank(stacked) == rank(mat)


def nullspace(mat: np.ndarray) -> np.ndarray:
    """Rows form a basis of {x : mat @ x = 0 (mod 2)}."""
    a, pivots = row_reduce(mat)
    cols = mat.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            if r < a.shape[0] and a[r, f]:
                basis[i, p] = 1
    return basis


class Solver:
    """Presolved linear system A x = b over GF(2) for a fixed A.

    Column order of A is preserved; pivot choices are deterministic, so the
    returned particular solution is a fixed linear function of b.
    """

    def __init__(self, a: np.ndarray):
        self.a = np.array(a, dtype=np.uint8) % 2
        rows, cols = self.a.shape
        aug = np.hstack([self.a, np.eye(rows, dtype=np.uint8)])
        red, piv = row_reduce(aug)
        self.cols = cols
        # pivots inside the A block define solvable coordinates; pivots in
        # the identity block flag inconsistency constraints on b
        self.pivots = [p for p in piv if p < cols]
        self.red = red
        self.n_solv = len(self.pivots)

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Particular solution x with A x = b, or raise ValueError."""
        b = np.asarray(b, dtype=np.uint8) % 2
        # y = R b where red = [RA | R]; system is consistent iff the rows
        # of RA that are zero also produce zero in y
        y = (self.red[:, self.cols:] @ b) % 2
        if np.any(y[self.n_solv:]):
            raise ValueError("inconsistent GF(2) system")
        x = np.zeros(self.cols, dtype=np.uint8)
        for r, p in enumerate(self.pivots):
            x[p] = y[r]
        if np.any((self.a @ x) % 2 != b):
            raise ValueError("inconsistent GF(2) system")
        return x
