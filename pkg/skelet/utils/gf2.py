from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np


def solve_z2(A: np.ndarray, b: np.ndarray) -> Tuple[bool, Optional[np.ndarray]]:
    """
    Solves A x = b over Z/2 by full Gaussian elimination.

    Returns (solvable, x) with free variables set to 0.
    """
    A = (np.asarray(A, dtype=np.uint8) & 1).copy()
    b = (np.asarray(b, dtype=np.uint8) & 1).copy()
    m, n = A.shape
    if m == 0:
        return True, np.zeros(n, dtype=np.uint8)
    Ab = np.concatenate([A, b[:, None]], axis=1)

    pivot_cols: List[int] = []
    r = 0
    for c in range(n):
        rows = np.nonzero(Ab[r:, c])[0]
        if rows.size == 0:
            continue
        pivot = r + int(rows[0])
        if pivot != r:
            Ab[[r, pivot]] = Ab[[pivot, r]]
        hits = np.nonzero(Ab[:, c])[0]
        for rr in hits:
            if rr != r:
                Ab[rr, :] ^= Ab[r, :]
        pivot_cols.append(c)
        r += 1
        if r == m:
            break

    # inconsistent row [0 ... 0 | 1]
    zero_rows = ~Ab[:, :n].any(axis=1)
    if np.any(zero_rows & (Ab[:, n] == 1)):
        return False, None

    x = np.zeros(n, dtype=np.uint8)
    for rr, c in enumerate(pivot_cols):
        x[c] = Ab[rr, n]
    return True, x


def rank_z2(A: np.ndarray) -> int:
    A = (np.asarray(A, dtype=np.uint8) & 1).copy()
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        pivot = r + int(rows[0])
        A[[r, pivot]] = A[[pivot, r]]
        for rr in np.nonzero(A[:, c])[0]:
            if rr != r:
                A[rr, :] ^= A[r, :]
        r += 1
    return r
