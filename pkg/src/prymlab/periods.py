"""Complex-side checks: Riemann relations, normalized periods, dual periods.

A normalized period matrix is a pair (Z, D): Z symmetric with positive
definite imaginary part, D a polarization divisor chain rendered as a
diagonal.  Floating point is used for the complex arithmetic; every
integer-valued claim (types, group membership) is checked exactly over Z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intlinalg as ila
from .skewforms import PolarizationType

TOL_SYM = 1e-9       # relative symmetry tolerance on Z
TOL_PD = 1e-9        # margin for positive definiteness of Im Z
TOL_INV = 1e-12      # condition-number guard: refuse cond > 1/TOL_INV


class PeriodNumericsError(ValueError):
    """Raised when a period computation is numerically unusable."""


def _as_complex(M) -> np.ndarray:
    return np.asarray(M, dtype=complex)


def _sym_residual(Z: np.ndarray) -> float:
    scale = max(1.0, float(np.linalg.norm(Z, np.inf)))
    return float(np.linalg.norm(Z - Z.T, np.inf)) / scale


@dataclass(frozen=True)
class PeriodMatrix:
    Z: np.ndarray
    D: PolarizationType

    def __post_init__(self):
        Z = _as_complex(self.Z)
        object.__setattr__(self, "Z", Z)
        g = self.D.g
        if Z.shape != (g, g):
            raise ValueError(f"Z must be {g}x{g} for type {self.D}")
        if _sym_residual(Z) > TOL_SYM:
            raise ValueError("Z is not symmetric within tolerance")
        min_eig = float(np.linalg.eigvalsh(Z.imag).min())
        if min_eig <= TOL_PD:
            raise ValueError("Im(Z) is not positive definite within tolerance")

    @property
    def g(self) -> int:
        return self.D.g

    def diag(self) -> np.ndarray:
        return np.diag([float(d) for d in self.D.divisors])


@dataclass(frozen=True)
class RawPeriod:
    Pi: np.ndarray
    D: PolarizationType

    def __post_init__(self):
        Pi = _as_complex(self.Pi)
        object.__setattr__(self, "Pi", Pi)
        g = self.D.g
        if Pi.shape != (g, 2 * g):
            raise ValueError(f"Pi must be {g}x{2 * g} for type {self.D}")
        if abs(np.linalg.det(self.Pi2)) < TOL_INV:
            raise ValueError("right half of the period matrix is singular")

    @property
    def Pi1(self) -> np.ndarray:
        return self.Pi[:, : self.D.g]

    @property
    def Pi2(self) -> np.ndarray:
        return self.Pi[:, self.D.g:]


def _dual_pairing(D: PolarizationType) -> np.ndarray:
    """[[0, D^-1], [-D^-1, 0]], the pairing matrix in the dual basis."""
    g = D.g
    Dinv = np.diag([1.0 / d for d in D.divisors])
    out = np.zeros((2 * g, 2 * g))
    out[:g, g:] = Dinv
    out[g:, :g] = -Dinv
    return out


def riemann_check(P: RawPeriod) -> dict:
    """Isotropy and positivity of the Riemann relations for a raw period."""
    J = _dual_pairing(P.D)
    iso = P.Pi @ J @ P.Pi.T
    herm = -1j * (P.Pi @ J @ np.conj(P.Pi).T)  # must be positive definite
    herm = (herm + np.conj(herm).T) / 2
    min_eig = float(np.linalg.eigvalsh(herm).min())
    residual = float(np.linalg.norm(iso, np.inf))
    return {
        "isotropy_residual": residual,
        "positivity_min_eig": min_eig,
        "pass": residual < 1e-8 and min_eig > 0.0,
    }


def normalize(P: RawPeriod) -> PeriodMatrix:
    """Left-GL(g) normalization to (Z, D): Z = D PI2^-1 PI1."""
    if np.linalg.cond(P.Pi2) > 1.0 / TOL_INV:
        raise PeriodNumericsError("period block is too ill-conditioned to normalize")
    D = np.diag([float(d) for d in P.D.divisors])
    Z = D @ np.linalg.solve(P.Pi2, P.Pi1)
    Z = (Z + Z.T) / 2  # symmetrize float noise; invariants re-checked below
    return PeriodMatrix(Z, P.D)


def dual_period(M: PeriodMatrix) -> PeriodMatrix:
    """Dual normalized period: reverse-index conjugate of e D^-1 Z D^-1."""
    e = M.D.exponent
    dinv = np.diag([1.0 / d for d in M.D.divisors])
    Zp = e * (dinv @ M.Z @ dinv)
    Zhat = Zp[::-1, ::-1]  # the antidiagonal exchange, applied as a permutation
    return PeriodMatrix(Zhat, M.D.dual())


def _blocks_to_matrix(a, b, c, d):
    top = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    bot = [list(rc) + list(rd) for rc, rd in zip(c, d)]
    return [[int(x) for x in row] for row in top + bot]


def in_gamma_d(blocks, D: PolarizationType) -> bool:
    """Exact integer test that blocks (a, b, c, d) preserve [[0,D],[-D,0]]."""
    N = _blocks_to_matrix(*blocks)
    g = D.g
    if len(N) != 2 * g:
        raise ValueError("block sizes do not match the polarization")
    JD = [[0] * (2 * g) for _ in range(2 * g)]
    for i, d in enumerate(D.divisors):
        JD[i][g + i] = d
        JD[g + i][i] = -d
    lhs = ila.mat_mul(ila.mat_mul(N, JD), ila.transpose(N))
    return ila.mat_eq(lhs, JD)


def gamma_action(Z, blocks, D: PolarizationType) -> np.ndarray:
    """Fractional action Z' = (aZ + bD)(D^-1 c Z + D^-1 d D)^-1 of Gamma_D."""
    if not in_gamma_d(blocks, D):
        raise ValueError("matrix does not satisfy the integral symplectic-D condition")
    a, b, c, d = (np.asarray(x, dtype=float) for x in blocks)
    Z = _as_complex(Z)
    Dm = np.diag([float(x) for x in D.divisors])
    Dinv = np.diag([1.0 / x for x in D.divisors])
    num = a @ Z + b @ Dm
    den = Dinv @ c @ Z + Dinv @ d @ Dm
    if np.linalg.cond(den) > 1.0 / TOL_INV:
        raise PeriodNumericsError("action denominator is too ill-conditioned")
    Zp = num @ np.linalg.inv(den)
    Zp = (Zp + Zp.T) / 2
    PeriodMatrix(Zp, D)  # re-check Siegel membership
    return Zp


def right_multiply(M: PeriodMatrix, blocks) -> RawPeriod:
    """(Z D) times the transposed block matrix, the raw side of the action."""
    N = np.asarray(_blocks_to_matrix(*blocks), dtype=float)
    Pi = np.hstack([M.Z, M.diag()]) @ N.T
    return RawPeriod(Pi, M.D)


def sample_siegel(g: int, seed: int) -> PeriodMatrix:
    """Deterministic sample of the Siegel space, principally polarized."""
    if g < 1:
        raise ValueError("genus must be positive")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((g, g))
    X = (A + A.T) / 2
    P = rng.standard_normal((g, g))
    Y = P.T @ P + 0.5 * np.eye(g)
    return PeriodMatrix(X + 1j * Y, PolarizationType((1,) * g))


def random_gamma_d(D: PolarizationType, seed: int, length: int = 4):
    """Deterministic pseudo-random element of Gamma_D, as (a, b, c, d) blocks.

    Built as a product of generators: the block swap [[0,-1],[1,0]] and
    unipotents [[1, D S],[0, 1]], [[1, 0],[D S, 1]] for small symmetric S.
    Words are kept short so the entries stay small enough for the float
    side of the action checks.
    """
    g = D.g
    rng = np.random.default_rng(seed)
    Dm = [[D.divisors[i] if i == j else 0 for j in range(g)] for i in range(g)]
    total = ila.identity(2 * g)
    for step in range(length):
        if step % 2 == 0:
            N = [[0] * (2 * g) for _ in range(2 * g)]
            for i in range(g):
                N[i][g + i] = -1
                N[g + i][i] = 1
        else:
            kind = rng.integers(1, 3)
            S = rng.integers(-1, 2, size=(g, g))
            S = [[int(S[i][j]) + int(S[j][i]) for j in range(g)] for i in range(g)]
            DS = ila.mat_mul(Dm, S)
            N = ila.identity(2 * g)
            for i in range(g):
                for j in range(g):
                    if kind == 1:
                        N[i][g + j] = DS[i][j]
                    else:
                        N[g + i][j] = DS[i][j]
        total = ila.mat_mul(total, N)
    a = [row[:g] for row in total[:g]]
    b = [row[g:] for row in total[:g]]
    c = [row[:g] for row in total[g:]]
    d = [row[g:] for row in total[g:]]
    blocks = (a, b, c, d)
    if not in_gamma_d(blocks, D):
        raise AssertionError("generator product left Gamma_D")
    return blocks


def hodge_riemann_bilinear(U, Q) -> dict:
    """Riemann bilinear checks for a candidate weight-one Hodge plane.

    ``U`` is a g x 2g complex matrix whose rows span the plane; ``Q`` a
    skew integer Gram matrix (a SkewLattice or raw rows).  Verifies that
    the plane and its conjugate span everything, that the plane is
    Q-isotropic, and that i Q(u, conj(u)) is positive definite.
    """
    U = _as_complex(U)
    rows = Q.rows() if hasattr(Q, "rows") else [list(r) for r in Q]
    Qm = np.asarray(rows, dtype=float)
    g2 = Qm.shape[0]
    if U.shape[1] != g2 or 2 * U.shape[0] != g2:
        raise ValueError("plane must be g x 2g matching the form")
    stacked = np.vstack([U, np.conj(U)])
    if np.linalg.matrix_rank(stacked, tol=1e-10) < g2:
        raise ValueError("plane meets its conjugate; not a weight-one Hodge structure")
    iso = U @ Qm @ U.T
    herm = 1j * (U @ Qm @ np.conj(U).T)
    herm = (herm + np.conj(herm).T) / 2
    residual = float(np.linalg.norm(iso, np.inf))
    min_eig = float(np.linalg.eigvalsh(herm).min())
    return {
        "isotropy_residual": residual,
        "positivity_min_eig": min_eig,
        "pass": residual < 1e-8 and min_eig > 0.0,
    }
