"""Exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced mod p; every routine
here is fraction-free (integer arithmetic mod p only, no floating point).
Vectors are columns throughout.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 2


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def as_mat(data, p: int) -> np.ndarray:
    a = np.asarray(data, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def row_echelon(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``a`` mod p and its pivot columns."""
    m = a.copy() % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        for rr in range(rows):
            if rr != r and m[rr, c]:
                m[rr] = (m[rr] - m[rr, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    """Row rank of ``a`` via exact elimination mod p."""
    if a.size == 0:
        return 0
    _, pivots = row_echelon(a, p)
    return len(pivots)


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Matrix whose columns are a basis of ker(a) over F_p."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return eye(cols)
    rref, pivots = row_echelon(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros(cols, len(free))
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for r, pc in enumerate(pivots):
            basis[pc, k] = (-rref[r, fc]) % p
    return basis


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    """Columns of ``a`` forming a basis of its column span."""
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    _, pivots = row_echelon(a, p)
    return a[:, pivots] % p


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One exact solution x of a @ x = b (mod p), or None if inconsistent.

    ``b`` may have several columns; the solution then solves all of them
    simultaneously. Free variables are set to zero, which makes the result
    deterministic.
    """
    rows, acols = a.shape
    b = np.asarray(b, dtype=np.int64)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if b.shape[0] != rows:
        raise ValueError(f"rhs has {b.shape[0]} rows, matrix has {rows}")
    bcols = b.shape[1]
    aug = np.hstack([a % p, b % p])
    rref, pivots = row_echelon(aug, p)
    x = zeros(acols, bcols)
    for r, c in enumerate(pivots):
        if c >= acols:
            return None
        x[c] = rref[r, acols:]
    return x


def in_span(basis: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Whether column vector ``v`` lies in the column span of ``basis``."""
    v = np.asarray(v, dtype=np.int64).reshape(-1, 1) % p
    if basis.shape[0] != v.shape[0]:
        raise ValueError(
            f"dimension mismatch: basis has {basis.shape[0]} rows, vector has {v.shape[0]}"
        )
    if not v.any():
        return True
    return solve(basis, v, p) is not None


def quotient_reps(v: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """Coset representatives completing span(w) to span(v).

    Columns of ``w`` must lie in the column span of ``v``. Returns columns of
    ``v`` (a subset) whose classes form a basis of span(v)/span(w).
    """
    if v.shape[0] != w.shape[0]:
        raise ValueError("dimension mismatch between ambient bases")
    if w.shape[1] and solve(v, w, p) is None:
        raise ValueError("w does not lie in the span of v")
    base_rank = rank(w, p)
    reps = []
    current = w
    for j in range(v.shape[1]):
        cand = np.hstack([current, v[:, j : j + 1]])
        if rank(cand, p) > base_rank:
            reps.append(v[:, j : j + 1])
            current = cand
            base_rank += 1
    if reps:
        return np.hstack(reps) % p
    return zeros(v.shape[0], 0)


def intersect_spans(bases: list[np.ndarray], p: int) -> np.ndarray:
    """Basis of the intersection of the column spans."""
    if not bases:
        raise ValueError("need at least one subspace")
    acc = bases[0]
    for b in bases[1:]:
        if acc.shape[1] == 0 or b.shape[1] == 0:
            return zeros(acc.shape[0], 0)
        # columns [acc | -b]; kernel vectors give acc-coefficients of common vectors
        ker = nullspace(np.hstack([acc, (-b) % p]), p)
        coeff = ker[: acc.shape[1], :]
        acc = column_space((acc @ coeff) % p, p)
    return acc


def all_subspaces(n: int, p: int):
    """Yield one canonical RREF basis matrix (n x k) per subspace of F_p^n.

    Enumerated by dimension, then by pivot set, then by the free entries in
    row-major order, so the enumeration is deterministic.
    """
    from itertools import combinations, product

    yield zeros(n, 0)
    for k in range(1, n + 1):
        for pivots in combinations(range(n), k):
            free_pos = [
                (r, c)
                for r in range(k)
                for c in range(n)
                if c > pivots[r] and c not in pivots
            ]
            for vals in product(range(p), repeat=len(free_pos)):
                m = zeros(k, n)
                for r, c in enumerate(pivots):
                    m[r, c] = 1
                for (r, c), val in zip(free_pos, vals):
                    m[r, c] = val
                yield m.T.copy()
