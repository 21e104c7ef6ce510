"""Exact integer matrix routines: Smith form, kernels, determinants, adjugates.

Everything here works on lists of lists of Python ints, so there is no
overflow and no floating point.  Matrices are row-major; ``A[i][j]`` is the
entry in row ``i``, column ``j``.
"""
from __future__ import annotations


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(A) -> list[list[int]]:
    return [list(row) for row in A]


def mat_mul(A, B) -> list[list[int]]:
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(m):
                    oi[j] += a * Bt[j]
    return out


def mat_vec(A, v) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A) -> list[list[int]]:
    return [list(col) for col in zip(*A)] if A else []


def mat_eq(A, B) -> bool:
    return len(A) == len(B) and all(list(r) == list(s) for r, s in zip(A, B))


def scalar_mul(c: int, A) -> list[list[int]]:
    return [[c * x for x in row] for row in A]


def det(A) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = copy_matrix(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A):
    """Return ``(S, P, Q)`` with ``P @ A @ Q = S`` in Smith normal form.

    ``P`` and ``Q`` are unimodular; ``S`` is diagonal with nonnegative
    entries forming a divisibility chain.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    S = copy_matrix(A)
    P = identity(n)
    Q = identity(m)

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            for row in Q:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        S[dst] = [x + c * y for x, y in zip(S[dst], S[src])]
        P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]

    def add_col(src, dst, c):
        for row in S:
            row[dst] += c * row[src]
        for row in Q:
            row[dst] += c * row[src]

    def min_entry(t):
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = abs(S[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    t = 0
    while True:
        found = min_entry(t)
        if found is None:
            break
        _, pi, pj = found
        swap_rows(t, pi)
        swap_cols(t, pj)
        # Clear row and column t; restart whenever a remainder shrinks the pivot.
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, n):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(t, i, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, m):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(t, j, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # Pivot must divide the rest of the submatrix.
        pivot = S[t][t]
        fixed = True
        for i in range(t + 1, n):
            bad = next((j for j in range(t + 1, m) if S[i][j] % pivot), None)
            if bad is not None:
                add_row(i, t, 1)
                fixed = False
                break
        if fixed:
            t += 1
            if t >= min(n, m):
                break

    for i in range(min(n, m)):
        if S[i][i] < 0:
            S[i] = [-x for x in S[i]]
            P[i] = [-x for x in P[i]]
    return S, P, Q


def kernel_basis(A):
    """Basis of the integer kernel of ``A`` (as a saturated sublattice).

    Returns a list of column vectors (each a list of ints).  The basis
    extends to a basis of the ambient lattice because it comes from the
    unimodular column transform of the Smith form.
    """
    n = len(A)
    m = len(A[0]) if n else 0
    if m == 0:
        return []
    S, _P, Q = smith_normal_form(A)
    rank = sum(1 for i in range(min(n, m)) if S[i][i] != 0)
    return [[Q[r][j] for r in range(m)] for j in range(rank, m)]


def inverse_times_det(A):
    """Return ``(adj, d)`` with ``adj = d * A^{-1}`` integral and ``d = det A``.

    Computed through the Smith decomposition, staying in integers.
    """
    n = len(A)
    S, P, Q = smith_normal_form(A)
    d = det(A)
    if d == 0:
        raise ZeroDivisionError("matrix is singular")
    prod_divisors = 1
    for i in range(n):
        prod_divisors *= S[i][i]
    # P A Q = S  =>  A^{-1} = Q S^{-1} P, and d/S[i][i] is integral.
    sign = 1 if d == prod_divisors else -1
    mid = [[(sign * (prod_divisors // S[i][i])) if i == j else 0 for j in range(n)]
           for i in range(n)]
    adj = mat_mul(mat_mul(Q, mid), P)
    return adj, d


def cokernel_invariants(A):
    """Nontrivial invariant factors of ``coker(A) = Z^n / im(A)``.

    Only meaningful when ``A`` has full row rank over Q (finite cokernel);
    a zero invariant is reported as 0 otherwise.
    """
    n = len(A)
    S, _, _ = smith_normal_form(A)
    m = len(A[0]) if n else 0
    factors = []
    for i in range(n):
        v = S[i][i] if i < min(n, m) else 0
        factors.append(v)
    return [f for f in factors if f != 1]
