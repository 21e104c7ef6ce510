"""Formal vector-bundle algebra on an elliptic curve.

Bundles are formal sums of atoms (r, d, twist): the unique indecomposable
of rank r and degree d, tensored by the line-bundle label ``twist``.
Twists are reduced words in a free abelian group of opaque symbols; two
degree-zero labels agree exactly when the words agree.  The section count
of an atom is classical: positive degree gives h0 = degree, negative
gives 0, and a degree-zero atom has a section only for the trivial twist.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

TRIVIAL: tuple = ()


class UnsupportedTensor(ValueError):
    """Tensor/symmetric-power combination outside the implemented closure."""


def twist(symbol: str, exp: int = 1) -> tuple:
    return twist_reduce({symbol: exp})


def twist_reduce(powers: dict) -> tuple:
    return tuple(sorted((s, e) for s, e in powers.items() if e))


def twist_mul(*ts) -> tuple:
    powers: dict = {}
    for t in ts:
        for s, e in t:
            powers[s] = powers.get(s, 0) + e
    return twist_reduce(powers)


def twist_pow(t: tuple, k: int) -> tuple:
    return twist_reduce({s: e * k for s, e in t})


def twist_inv(t: tuple) -> tuple:
    return twist_pow(t, -1)


def twist_str(t: tuple) -> str:
    if not t:
        return "O"
    return "".join(s if e == 1 else f"{s}^{e}" for s, e in t)


@dataclass(frozen=True, order=True)
class Atom:
    rank: int
    degree: int
    twist: tuple = TRIVIAL

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def dual(self) -> "Atom":
        return Atom(self.rank, -self.degree, twist_inv(self.twist))

    def __str__(self):
        base = f"F({self.rank},{self.degree})"
        return base if not self.twist else f"{twist_str(self.twist)}*{base}"


@dataclass(frozen=True)
class BundleExpr:
    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("empty bundle expression")
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    def __str__(self):
        return " (+) ".join(str(a) for a in self.atoms)


def bundle(*atoms) -> BundleExpr:
    return BundleExpr(tuple(atoms))


def line(degree: int, symbol: str | None = None, exp: int = 1) -> Atom:
    return Atom(1, degree, twist(symbol, exp) if symbol else TRIVIAL)


def fr(r: int) -> Atom:
    """The unique degree-0 indecomposable of rank r with a section."""
    return Atom(r, 0, TRIVIAL)


def rank(E: BundleExpr) -> int:
    return sum(a.rank for a in E.atoms)


def degree(E: BundleExpr) -> int:
    return sum(a.degree for a in E.atoms)


def slope(E: BundleExpr) -> Fraction:
    return Fraction(degree(E), rank(E))


def h0(E: BundleExpr) -> int:
    total = 0
    for a in E.atoms:
        if a.degree > 0:
            total += a.degree
        elif a.degree == 0 and a.twist == TRIVIAL:
            total += 1
    return total


def dual(E: BundleExpr) -> BundleExpr:
    return BundleExpr(tuple(a.dual() for a in E.atoms))


def _tensor_atoms(x: Atom, y: Atom) -> list[Atom]:
    if x.rank == 1:
        return [Atom(y.rank, y.degree + y.rank * x.degree, twist_mul(x.twist, y.twist))]
    if y.rank == 1:
        return _tensor_atoms(y, x)
    if x.degree % x.rank or y.degree % y.rank:
        raise UnsupportedTensor(
            f"tensor of {x} and {y} is outside the implemented closure "
            "(both factors must be line twists of degree-0 indecomposables)"
        )
    lx, ly = x.degree // x.rank, y.degree // y.rank
    t = twist_mul(x.twist, y.twist)
    out = []
    for k in range(min(x.rank, y.rank)):
        m = x.rank + y.rank - 1 - 2 * k
        out.append(Atom(m, m * (lx + ly), t))
    return out


def tensor(E1: BundleExpr, E2: BundleExpr) -> BundleExpr:
    out = []
    for x in E1.atoms:
        for y in E2.atoms:
            out.extend(_tensor_atoms(x, y))
    return BundleExpr(tuple(out))


def end(E: BundleExpr) -> BundleExpr:
    return tensor(E, dual(E))


def det_rank2(E: BundleExpr) -> Atom:
    """Determinant line of a rank-2 expression, where expressible."""
    if rank(E) != 2:
        raise UnsupportedTensor("determinant helper only implemented for rank 2")
    if len(E.atoms) == 2:
        x, y = E.atoms
        return Atom(1, x.degree + y.degree, twist_mul(x.twist, y.twist))
    (a,) = E.atoms
    if a.degree % 2:
        raise UnsupportedTensor(
            "determinant of an odd-degree rank-2 indecomposable has no twist word"
        )
    return Atom(1, a.degree, twist_pow(a.twist, 2))


def sym3_rank2(E: BundleExpr) -> BundleExpr:
    """Third symmetric power of a rank-2 expression."""
    if rank(E) != 2:
        raise UnsupportedTensor(f"sym3 needs rank 2, got rank {rank(E)}")
    if len(E.atoms) == 2:
        x, y = E.atoms
        a, b = x.degree, y.degree
        t, u = x.twist, y.twist
        return bundle(
            Atom(1, 3 * a, twist_pow(t, 3)),
            Atom(1, 2 * a + b, twist_mul(twist_pow(t, 2), u)),
            Atom(1, a + 2 * b, twist_mul(t, twist_pow(u, 2))),
            Atom(1, 3 * b, twist_pow(u, 3)),
        )
    (a,) = E.atoms
    if a.degree % 2:
        raise UnsupportedTensor(
            "sym3 of an odd-degree rank-2 indecomposable is outside the closure"
        )
    half = a.degree // 2
    # L (x) F_2 has S^3 = L^3 (x) F_4
    return bundle(Atom(4, 12 * half, twist_pow(a.twist, 3)))


def sym3_det_inverse(E: BundleExpr) -> BundleExpr:
    """S^3(E) tensored with det(E)^-1, for rank-2 expressions."""
    d = det_rank2(E)
    inv_line = bundle(Atom(1, -d.degree, twist_inv(d.twist)))
    return tensor(sym3_rank2(E), inv_line)


def h0_sym3_twisted_split(a: int, b: int, eps: int) -> int:
    """Closed-form section count of S^3(L+M) (x) (LM)^-1: 2(a+b) + eps."""
    if not 1 <= a:
        raise ValueError(f"requires a >= 1, got a={a}")
    if not a <= b:
        raise ValueError(f"requires a <= b, got a={a}, b={b}")
    if not 2 * a >= b:
        raise ValueError(f"requires 2a >= b, got a={a}, b={b}")
    if eps not in (0, 1):
        raise ValueError(f"eps must be 0 or 1, got {eps}")
    if eps == 1 and b != 2 * a:
        raise ValueError("eps=1 needs degree(L^2) == degree(M), i.e. b == 2a")
    return 2 * (a + b) + eps


# ---------------------------------------------------------------------------
# moduli counts for triple covers


_CLOSED_FORMS = {
    1: "n-(b-a)",
    2: "n",
    3: "n-3",
    4: "n-(b-a)",
    5: "n-1",
}


def _case_bundle(case: int, a, b, e):
    """Parameter-space dimension and Tschirnhausen module for each case."""
    if case == 1:
        if a is None or b is None:
            raise ValueError("case 1 needs a and b")
        if not (1 <= a < b < 2 * a):
            raise ValueError(f"case 1 requires 1 <= a < b < 2a, got a={a}, b={b}")
        return 2, bundle(line(a, "L"), line(b, "M")), a, b
    if case == 2:
        if a is None:
            a = b if b is not None else (e // 2 if e is not None else None)
        if a is None:
            raise ValueError("case 2 needs a (or e = 2a)")
        if b is not None and b != a:
            raise ValueError(f"case 2 requires a == b, got a={a}, b={b}")
        if a < 1:
            raise ValueError(f"case 2 requires a >= 1, got a={a}")
        # n = 4a is automatically divisible by 4
        return 2, bundle(line(a, "L"), line(a, "M")), a, a
    if case == 3:
        if a is None:
            a = b if b is not None else (e // 2 if e is not None else None)
        if a is None:
            raise ValueError("case 3 needs a (or e = 2a)")
        if b is not None and b != a:
            raise ValueError(f"case 3 requires a == b, got a={a}, b={b}")
        if a < 1:
            raise ValueError(f"case 3 requires a >= 1, got a={a}")
        return 1, bundle(line(a, "L"), line(a, "L")), a, a
    if case == 4:
        if a is None and b is not None:
            if b % 2:
                raise ValueError(f"case 4 requires b == 2a, got odd b={b}")
            a = b // 2
        if a is None:
            raise ValueError("case 4 needs a (or b = 2a)")
        if b is None:
            b = 2 * a
        if b != 2 * a or a < 1:
            raise ValueError(f"case 4 requires b == 2a and a >= 1, got a={a}, b={b}")
        return None, None, a, b  # both subcases evaluated by the caller
    if case == 5:
        if e is None:
            raise ValueError("case 5 needs e")
        if e < 2 or e % 2:
            raise ValueError(f"case 5 requires even e >= 2, got e={e}")
        return 1, bundle(Atom(2, e, twist("L"))), None, None
    raise ValueError(f"case must be 1..5, got {case}")


def moduli_count(case: int, a: int | None = None, b: int | None = None,
                 e: int | None = None) -> int:
    """Upper bound for the number of moduli, computed compositionally.

    The bound is dim(parameter space) + h0(S^3 E (x) det(E)^-1) - h0(End E),
    never the closed form; agreement with the closed form is a test.
    """
    base_dim, E, a, b = _case_bundle(case, a, b, e)
    if case == 4:
        # subcase M != L^2 (base dim 2) and subcase M = L^2 (base dim 1);
        # both are computed and must agree
        subcases = (
            (2, Atom(1, b, twist("M"))),
            (1, Atom(1, b, twist("L", 2))),
        )
        counts = []
        for dim, m_atom in subcases:
            Ecase = bundle(line(a, "L"), m_atom)
            counts.append(dim + h0(sym3_det_inverse(Ecase)) - h0(end(Ecase)))
        if counts[0] != counts[1]:
            raise AssertionError("case 4 subcases disagree")
        return counts[0]
    return base_dim + h0(sym3_det_inverse(E)) - h0(end(E))


def moduli_closed_form(case: int, a: int | None = None, b: int | None = None,
                       e: int | None = None) -> tuple[str, int]:
    """The case's closed-form label and its value."""
    _dim, _E, a, b = _case_bundle(case, a, b, e)
    if case in (1, 4):
        n = 2 * (a + b)
        return _CLOSED_FORMS[case], n - (b - a)
    if case == 2:
        n = 4 * a
        return _CLOSED_FORMS[case], n
    if case == 3:
        n = 4 * a
        return _CLOSED_FORMS[case], n - 3
    n = 2 * e
    return _CLOSED_FORMS[case], n - 1


# ---------------------------------------------------------------------------
# stability predicates


@dataclass(frozen=True)
class StabilityFlags:
    semistable: bool
    stable: bool
    polystable: bool
    regular: bool
    regular_polystable: bool


def _h0_end_semistable(E: BundleExpr) -> int:
    """h0(End E) for a semistable expression, via the F_h decomposition.

    Every slope-mu indecomposable is (base of coprime rank/degree) (x) F_h;
    two such have Hom of dimension min(h, h') when the bases agree and 0
    otherwise.
    """
    mu = slope(E)
    r0 = mu.denominator
    pieces = []
    for atom in E.atoms:
        h = atom.rank // r0
        if atom.rank % r0:
            raise AssertionError("slope denominator does not divide an atom rank")
        pieces.append((atom.twist, h))
    total = 0
    for t1, h1 in pieces:
        for t2, h2 in pieces:
            if t1 == t2:
                total += min(h1, h2)
    return total


def stability(E: BundleExpr) -> StabilityFlags:
    slopes = {a.slope for a in E.atoms}
    semistable = len(slopes) == 1
    stable = (
        len(E.atoms) == 1
        and math.gcd(E.atoms[0].rank, abs(E.atoms[0].degree)) == 1
    )
    polystable = semistable and all(
        math.gcd(a.rank, abs(a.degree)) == 1 for a in E.atoms
    )
    regular = False
    regular_polystable = False
    if semistable:
        mu = slope(E)
        r0 = mu.denominator
        h = rank(E) // r0
        regular = _h0_end_semistable(E) == h
        regular_polystable = polystable and len(set(E.atoms)) == len(E.atoms)
    return StabilityFlags(
        semistable=semistable,
        stable=stable,
        polystable=polystable,
        regular=regular,
        regular_polystable=regular_polystable,
    )


# ---------------------------------------------------------------------------
# covering degree bookkeeping


def tschirnhausen_degree(d: int, g_cover: int, g_base: int) -> tuple[int, int]:
    """Degrees (deg E, deg R) of the rank-(d-1) module and the ramification.

    From chi(O_cover) = chi(O_base) + chi(E-dual) and Riemann-Roch:
    deg E = g_cover - 1 + d * (1 - g_base), deg R = 2 deg E.
    """
    if d < 2:
        raise ValueError(f"cover degree must be >= 2, got {d}")
    if not g_cover >= g_base >= 0:
        raise ValueError(
            f"need g_cover >= g_base >= 0, got g_cover={g_cover}, g_base={g_base}"
        )
    deg_e = g_cover - 1 + d * (1 - g_base)
    deg_r = 2 * deg_e
    # cross-check against Riemann-Hurwitz
    if deg_r != 2 * g_cover - 2 - d * (2 * g_base - 2):
        raise AssertionError("degree bookkeeping is inconsistent")
    if deg_r < 0:
        raise ValueError(
            f"negative ramification degree {deg_r}: no such cover exists"
        )
    return deg_e, deg_r


# ---------------------------------------------------------------------------
# expression parser for the CLI


_TOKEN = re.compile(
    r"\s*(F\(\s*-?\d+\s*,\s*-?\d+\s*\)|L\(\s*[A-Za-z_]\w*\s*,\s*-?\d+\s*\)|⊕|⊗|\(\+\)|\(x\))"
)
_F_ATOM = re.compile(r"F\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_L_ATOM = re.compile(r"L\(\s*([A-Za-z_]\w*)\s*,\s*(-?\d+)\s*\)")


def parse_bundle(text: str) -> BundleExpr:
    """Parse ``F(r,d)`` / ``L(sym,deg)`` atoms joined by ⊕/(+) and ⊗/(x)."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"cannot parse bundle expression at: {text[pos:]!r}")
            break
        tok = m.group(1)
        if tok == "(+)":
            tok = "⊕"
        elif tok == "(x)":
            tok = "⊗"
        tokens.append(tok)
        pos = m.end()
    if not tokens:
        raise ValueError("empty bundle expression")

    def atom_of(tok: str) -> BundleExpr:
        m = _F_ATOM.fullmatch(tok)
        if m:
            return bundle(Atom(int(m.group(1)), int(m.group(2))))
        m = _L_ATOM.fullmatch(tok)
        if m:
            return bundle(Atom(1, int(m.group(2)), twist(m.group(1))))
        raise ValueError(f"bad atom token {tok!r}")

    # expr := term (⊕ term)*, term := atom (⊗ atom)*, products left-associative
    def parse_term(idx: int) -> tuple[BundleExpr, int]:
        node = atom_of(tokens[idx])
        idx += 1
        while idx < len(tokens) and tokens[idx] == "⊗":
            if idx + 1 >= len(tokens):
                raise ValueError("dangling tensor operator")
            node = tensor(node, atom_of(tokens[idx + 1]))
            idx += 2
        return node, idx

    node, idx = parse_term(0)
    while idx < len(tokens):
        if tokens[idx] != "⊕":
            raise ValueError(f"expected ⊕ at token {idx}, got {tokens[idx]!r}")
        rhs, idx2 = parse_term(idx + 1)
        node = BundleExpr(node.atoms + rhs.atoms)
        idx = idx2
    return node
