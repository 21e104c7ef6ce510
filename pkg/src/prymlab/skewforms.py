"""Exact arithmetic of integer alternating forms.

A nondegenerate skew-symmetric Gram matrix over Z is congruent to the
standard block form [[0, D], [-D, 0]] with D = diag(d_1, ..., d_g),
d_i | d_{i+1}.  The chain (d_1, ..., d_g) is the polarization type; its
last entry is the exponent.  Dualization sends the form E to e * E^* on
the dual lattice, with type d-hat_i = d_g / d_{g-i+1}.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import intlinalg as ila


@dataclass(frozen=True)
class PolarizationType:
    divisors: tuple[int, ...]

    def __post_init__(self):
        ds = self.divisors
        if not ds or any(d <= 0 for d in ds):
            raise ValueError(f"divisors must be positive, got {ds}")
        for a, b in zip(ds, ds[1:]):
            if b % a:
                raise ValueError(f"divisor chain broken: {a} does not divide {b}")

    @property
    def exponent(self) -> int:
        return self.divisors[-1]

    @property
    def g(self) -> int:
        return len(self.divisors)

    def dual(self) -> "PolarizationType":
        e = self.exponent
        return PolarizationType(tuple(e // d for d in reversed(self.divisors)))

    def __str__(self) -> str:
        return "(" + ",".join(str(d) for d in self.divisors) + ")"


@dataclass(frozen=True)
class SkewLattice:
    """Free Z-module of even rank with a nondegenerate alternating Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        A = self.gram
        n = len(A)
        if n % 2:
            raise ValueError(f"rank must be even, got {n}")
        if any(len(row) != n for row in A):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            if A[i][i] != 0:
                raise ValueError("gram matrix must have zero diagonal")
            for j in range(i + 1, n):
                if A[i][j] != -A[j][i]:
                    raise ValueError("gram matrix must be skew-symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def is_nondegenerate(self) -> bool:
        return self.rank == 0 or ila.det(self.rows()) != 0

    @classmethod
    def from_rows(cls, rows) -> "SkewLattice":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))


def standard_gram(divisors) -> SkewLattice:
    """The block form [[0, D], [-D, 0]] for a divisor chain."""
    ds = list(divisors)
    g = len(ds)
    n = 2 * g
    A = [[0] * n for _ in range(n)]
    for i, d in enumerate(ds):
        A[i][g + i] = d
        A[g + i][i] = -d
    return SkewLattice.from_rows(A)


def _congruence_reduce(A):
    """Blocked reduction of a skew matrix: U with U^T A U = pairwise blocks.

    Returns (U, divisors).  Pivots are chosen as the smallest nonzero entry
    in the remaining submatrix, ties broken in row-major order, so the
    transform is deterministic.
    """
    n = len(A)
    M = ila.copy_matrix(A)
    U = ila.identity(n)

    def swap(i, j):
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    def add(src, dst, c):
        # basis change e_dst += c * e_src: congruent row+column operation
        if c == 0:
            return
        M[dst] = [x + c * y for x, y in zip(M[dst], M[src])]
        for row in M:
            row[dst] += c * row[src]
        for row in U:
            row[dst] += c * row[src]

    def negate(i):
        M[i] = [-x for x in M[i]]
        for row in M:
            row[i] = -row[i]
        for row in U:
            row[i] = -row[i]

    def min_entry(t):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                v = abs(M[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    divisors = []
    t = 0
    while t < n:
        found = min_entry(t)
        if found is None:
            raise ValueError("form is degenerate")
        _, pi, pj = found
        swap(t, pi)
        if pj == t:
            pj = pi
        swap(t + 1, pj)
        if M[t][t + 1] < 0:
            negate(t + 1)
        # Clear row t and row t+1 beyond the pivot pair; restart on remainders.
        while True:
            a = M[t][t + 1]
            progress = False
            for j in range(t + 2, n):
                if M[t][j]:
                    q = M[t][j] // a
                    add(t + 1, j, -q)
                    if M[t][j]:
                        progress = True
                if M[t + 1][j]:
                    q = M[t + 1][j] // a
                    add(t, j, q)  # M[t+1][j] += c*M[t+1][t] = -c*a with c=-q
                    if M[t + 1][j]:
                        progress = True
            if not progress and all(
                M[t][j] == 0 and M[t + 1][j] == 0 for j in range(t + 2, n)
            ):
                # pivot must divide the remaining submatrix
                bad = None
                for i in range(t + 2, n):
                    for j in range(t + 2, n):
                        if M[i][j] % a:
                            bad = (i, j)
                            break
                    if bad:
                        break
                if bad is None:
                    break
                add(bad[0], t, 1)
            else:
                # a remainder appeared somewhere; pick the new smallest pivot
                found = min_entry(t)
                _, pi, pj = found
                swap(t, pi)
                if pj == t:
                    pj = pi
                swap(t + 1, pj)
                if M[t][t + 1] < 0:
                    negate(t + 1)
        divisors.append(M[t][t + 1])
        t += 2
    return U, divisors


def alternating_divisors(L: SkewLattice) -> PolarizationType:
    """Elementary divisor chain (d_1 | ... | d_g) of a nondegenerate skew form."""
    if L.rank == 0 or not L.is_nondegenerate():
        raise ValueError("alternating divisors need a nondegenerate form of positive rank")
    _, divisors = _congruence_reduce(L.rows())
    return PolarizationType(tuple(divisors))


def symplectic_basis(L: SkewLattice) -> list[list[int]]:
    """Unimodular U with U^T A U = [[0, D], [-D, 0]], D the divisor chain."""
    if not L.is_nondegenerate():
        raise ValueError("symplectic basis needs a nondegenerate form")
    U0, divisors = _congruence_reduce(L.rows())
    g = len(divisors)
    # interleaved pair blocks -> standard block layout
    perm = [2 * i for i in range(g)] + [2 * i + 1 for i in range(g)]
    U = [[row[p] for p in perm] for row in U0]
    expected = standard_gram(divisors).rows()
    got = ila.mat_mul(ila.mat_mul(ila.transpose(U), L.rows()), U)
    if not ila.mat_eq(got, expected):
        raise AssertionError("symplectic reduction failed to reach standard form")
    if abs(ila.det(U)) != 1:
        raise AssertionError("reduction transform is not unimodular")
    return U


def dual_form(L: SkewLattice) -> SkewLattice:
    """Gram of the dualized form: -e * A^{-1} on the dual basis (always integral)."""
    t = alternating_divisors(L)
    e = t.exponent
    adj, d = ila.inverse_times_det(L.rows())
    out = []
    for row in adj:
        new_row = []
        for x in row:
            num = -e * x
            if num % d:
                raise AssertionError("dual form is not integral; divisor chain is wrong")
            new_row.append(num // d)
        out.append(new_row)
    return SkewLattice.from_rows(out)


def normalize_smallest_divisor(L: SkewLattice) -> tuple[int, SkewLattice]:
    """Divide the Gram matrix by its smallest elementary divisor."""
    t = alternating_divisors(L)
    m = t.divisors[0]
    out = [[x // m for x in row] for row in L.gram]
    if any(x % m for row in L.gram for x in row):
        raise AssertionError("smallest divisor does not divide the Gram matrix")
    return m, SkewLattice.from_rows(out)


def check_duality_relations(L: SkewLattice) -> dict:
    """Verify the dual-pairing identities at the matrix level.

    With A the Gram of E, A-hat = -e A^{-1} the Gram of the dual form, and
    matrices of the induced maps taken in the dual bases, the composites in
    both orders must equal -e times the identity, the dual form must be
    integral of the reversed type, and the double dual must equal 1/d_1
    times the original form.
    """
    t = alternating_divisors(L)
    e = t.exponent
    d1 = t.divisors[0]
    n = L.rank
    A = L.rows()
    dual = dual_form(L)
    A_hat = dual.rows()
    minus_e = ila.scalar_mul(-e, ila.identity(n))
    comp1 = ila.mat_mul(ila.transpose(A_hat), ila.transpose(A))
    comp2 = ila.mat_mul(ila.transpose(A), ila.transpose(A_hat))
    dual_type = alternating_divisors(dual)
    double = dual_form(dual)
    expected_double = [[x // d1 for x in row] for row in A]
    report = {
        "type": t,
        "dual_type": dual_type,
        "phi_hat_after_phi": ila.mat_eq(comp1, minus_e),
        "phi_after_phi_hat": ila.mat_eq(comp2, minus_e),
        "dual_integral": True,  # dual_form would have raised otherwise
        "dual_type_reversed": dual_type.divisors
        == tuple(e // d for d in reversed(t.divisors)),
        "double_dual_scales": all(x % d1 == 0 for row in A for x in row)
        and ila.mat_eq(double.rows(), expected_double),
    }
    report["ok"] = all(v for k, v in report.items() if isinstance(v, bool))
    return report
