"""Monodromy tuples of simple branched covers of a genus-1 curve.

A degree-``d`` cover of a torus branched at ``n`` points is encoded by
permutations ``(tau_1, ..., tau_n, sigma, rho)`` of ``{1..d}`` subject to

    tau_1 * ... * tau_n * sigma * rho * sigma^-1 * rho^-1 = id,

the image of the surface-group relation.  Products compose left to right:
``mul(p, q)`` acts by ``p`` first, then ``q``.  A cover is *simple* when
every ``tau_i`` is a transposition.

Permutations are tuples of 0-based images; the JSON wire format uses
1-based image arrays.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

DEFAULT_GUARD = 10 ** 9
GUARD_ENV = "PRYMLAB_GUARD"
CONJUGATOR_DEGREE_CAP = 8  # canonical forms try all d! conjugators


class GuardExceeded(Exception):
    """Search space too large; carries the bound that tripped."""

    def __init__(self, candidates: int, bound: int):
        self.candidates = candidates
        self.bound = bound
        super().__init__(
            f"enumeration guard exceeded: {candidates} candidate tuples > bound {bound}"
        )


# ---------------------------------------------------------------------------
# permutations


def identity_perm(d: int) -> tuple[int, ...]:
    return tuple(range(d))


def mul(p, q):
    """Compose left-to-right: x -> q[p[x]]."""
    return tuple(q[px] for px in p)


def inverse(p):
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def conjugate(p, g):
    """g^-1-free conjugation x -> g(p(g^-1 x)); i.e. relabel points by g."""
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[g[i]] = g[pi]
    return tuple(out)


def cycles(p):
    """Cycle decomposition, fixed points included, each cycle min-first."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_count(p) -> int:
    return len(cycles(p))


def is_transposition(p) -> bool:
    return sum(1 for i, pi in enumerate(p) if pi != i) == 2


def transpositions(d: int):
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            images = list(range(d))
            images[i], images[j] = j, i
            out.append(tuple(images))
    return out


def from_cycles(d: int, *cycs) -> tuple[int, ...]:
    """Permutation from 1-based cycles, e.g. ``from_cycles(3, (1, 2, 3))``."""
    images = list(range(d))
    for cyc in cycs:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def perm_order(p) -> int:
    out = 1
    for cyc in cycles(p):
        k = len(cyc)
        out = out * k // _gcd(out, k)
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# tuples


@dataclass(frozen=True)
class HurwitzTuple:
    """Monodromy data (tau_1..tau_n, sigma, rho) of a cover of a torus."""

    degree: int
    branch_perms: tuple[tuple[int, ...], ...]
    sigma: tuple[int, ...]
    rho: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        for p in (*self.branch_perms, self.sigma, self.rho):
            if len(p) != self.degree or sorted(p) != list(range(self.degree)):
                raise ValueError(
                    f"entry {p} is not a permutation of degree {self.degree}"
                )

    @property
    def n(self) -> int:
        return len(self.branch_perms)

    def entries(self):
        return (*self.branch_perms, self.sigma, self.rho)

    def key(self):
        return (*self.branch_perms, self.sigma, self.rho)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "branch": [[x + 1 for x in p] for p in self.branch_perms],
            "sigma": [x + 1 for x in self.sigma],
            "rho": [x + 1 for x in self.rho],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HurwitzTuple":
        d = obj["degree"]

        def conv(arr):
            return tuple(x - 1 for x in arr)

        return cls(
            degree=d,
            branch_perms=tuple(conv(p) for p in obj["branch"]),
            sigma=conv(obj["sigma"]),
            rho=conv(obj["rho"]),
        )


@dataclass(frozen=True)
class TupleClass:
    """A simultaneous-conjugation class, held by its canonical representative."""

    representative: HurwitzTuple
    orbit_size_conj: int


@dataclass(frozen=True)
class ValidationReport:
    relation_ok: bool
    transitive: bool
    simple: bool

    @property
    def ok(self) -> bool:
        return self.relation_ok and self.transitive and self.simple


def relation_product(t: HurwitzTuple):
    """tau_1 ... tau_n [sigma, rho] with left-to-right composition."""
    p = identity_perm(t.degree)
    for tau in t.branch_perms:
        p = mul(p, tau)
    s, r = t.sigma, t.rho
    for q in (s, r, inverse(s), inverse(r)):
        p = mul(p, q)
    return p


def is_transitive(degree: int, perms) -> bool:
    if degree == 1:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for p in perms:
            y = p[x]
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen) == degree


def validate_tuple(t: HurwitzTuple) -> ValidationReport:
    """Check the surface relation, transitivity, and simplicity."""
    return ValidationReport(
        relation_ok=relation_product(t) == identity_perm(t.degree),
        transitive=is_transitive(t.degree, t.entries()),
        simple=all(is_transposition(p) for p in t.branch_perms),
    )


def genus_of_cover(t: HurwitzTuple) -> int:
    """Genus from Riemann-Hurwitz over a genus-1 base: 2g - 2 = sum(d - #cycles)."""
    report = validate_tuple(t)
    if not report.relation_ok:
        raise ValueError("tuple does not satisfy the surface relation")
    if not report.transitive:
        raise ValueError("cover is disconnected; genus refused for non-transitive tuples")
    total = sum(t.degree - cycle_count(tau) for tau in t.branch_perms)
    if total % 2:
        raise ValueError("odd total ramification cannot occur for a valid tuple")
    return total // 2 + 1


def monodromy_group_order(t: HurwitzTuple) -> int:
    """Order of the subgroup generated by all entries, by closure under products."""
    gens = [p for p in t.entries()]
    ident = identity_perm(t.degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return len(seen)


def sample_tuple(d: int, n: int) -> HurwitzTuple:
    """The explicit valid tuple: n copies of (1 2), sigma = (1 2 ... d), rho = sigma^-1."""
    if d < 2:
        raise ValueError(f"degree must be >= 2, got {d}")
    if n < 0 or n % 2:
        raise ValueError(f"branch count must be even and >= 0, got {n}")
    swap = from_cycles(d, (1, 2))
    cyc = tuple(list(range(1, d)) + [0])  # (1 2 ... d) as 0-based images
    return HurwitzTuple(
        degree=d,
        branch_perms=(swap,) * n,
        sigma=cyc,
        rho=inverse(cyc),
    )


# ---------------------------------------------------------------------------
# canonical forms and enumeration


def _all_perms(d: int):
    return [tuple(p) for p in itertools.permutations(range(d))]


def canonical_form(t: HurwitzTuple) -> tuple[HurwitzTuple, int]:
    """Lexicographically minimal simultaneous conjugate, plus orbit size.

    Exact: tries all d! conjugators (capped at degree 8).
    """
    d = t.degree
    if d > CONJUGATOR_DEGREE_CAP:
        raise GuardExceeded(_factorial(d), _factorial(CONJUGATOR_DEGREE_CAP))
    orbit = set()
    best = None
    for g in _all_perms(d):
        img = tuple(conjugate(p, g) for p in t.entries())
        orbit.add(img)
        if best is None or img < best:
            best = img
    rep = HurwitzTuple(d, best[:-2], best[-2], best[-1])
    return rep, len(orbit)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def current_guard(guard: int | None = None) -> int:
    if guard is not None:
        return guard
    env = os.environ.get(GUARD_ENV)
    if env:
        return int(env)
    return DEFAULT_GUARD


def enumerate_simple_classes(d: int, n: int, guard: int | None = None) -> list[TupleClass]:
    """All valid, transitive, simple classes up to simultaneous conjugation.

    Deterministic: canonical representatives in sorted order.  The guard
    refuses searches whose unpruned candidate count (d!)^(n+2) exceeds the
    bound (default 1e9, PRYMLAB_GUARD overrides).
    """
    if n < 0 or n % 2:
        raise ValueError(f"branch count must be even and >= 0, got {n}")
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    bound = current_guard(guard)
    candidates = _factorial(d) ** (n + 2)
    if candidates > bound:
        raise GuardExceeded(candidates, bound)
    if d == 1:
        if n > 0:
            return []  # no transpositions exist in S_1
        t = HurwitzTuple(1, (), (0,), (0,))
        return [TupleClass(t, 1)]

    trans = transpositions(d)
    perms = _all_perms(d)
    ident = identity_perm(d)
    seen: dict = {}
    # Pruned search: branch entries over transpositions only, then solve the
    # relation for the commutator [sigma, rho].
    for taus in itertools.product(trans, repeat=n):
        prefix = ident
        for tau in taus:
            prefix = mul(prefix, tau)
        need = inverse(prefix)  # [sigma, rho] must equal this
        for s in perms:
            s_inv = inverse(s)
            for r in perms:
                if mul(mul(mul(s, r), s_inv), inverse(r)) != need:
                    continue
                entries = (*taus, s, r)
                if not is_transitive(d, entries):
                    continue
                t = HurwitzTuple(d, taus, s, r)
                rep, orbit_size = canonical_form(t)
                seen.setdefault(rep.key(), (rep, orbit_size))
    classes = [TupleClass(rep, size) for rep, size in seen.values()]
    classes.sort(key=lambda c: c.representative.key())
    return classes


# ---------------------------------------------------------------------------
# mapping-class moves and orbit closure

# Move set: elementary Hurwitz braids on adjacent branch entries, a slide of
# the last branch entry across the sigma handle, a slide of the first across
# the rho handle, and the cyclic rotation that carries the first entry past
# the handle commutator.  Each preserves the relation as a group identity;
# applications are asserted below.


def braid_move(t: HurwitzTuple, i: int) -> HurwitzTuple:
    """(tau_i, tau_{i+1}) -> (tau_i tau_{i+1} tau_i^-1, tau_i), 0-based i.

    All words here and below are evaluated left to right with ``mul``.
    """
    taus = list(t.branch_perms)
    a, b = taus[i], taus[i + 1]
    taus[i] = mul(mul(a, b), inverse(a))
    taus[i + 1] = a
    return HurwitzTuple(t.degree, tuple(taus), t.sigma, t.rho)


def slide_last_over_sigma(t: HurwitzTuple) -> HurwitzTuple:
    """Slide tau_n across the sigma handle: conjugate tau_n, absorb into sigma.

    With c = tau_n * sigma rho sigma^-1 (left-to-right products) the image
    (tau_1..tau_{n-1}, c tau_n c^-1, c sigma, rho) satisfies the relation
    whenever the input does.
    """
    taus = list(t.branch_perms)
    tau = taus[-1]
    s, r = t.sigma, t.rho
    c = mul(mul(mul(tau, s), r), inverse(s))
    taus[-1] = mul(mul(c, tau), inverse(c))
    new_sigma = mul(c, s)
    return HurwitzTuple(t.degree, tuple(taus), new_sigma, r)


def slide_first_over_rho(t: HurwitzTuple) -> HurwitzTuple:
    """Slide tau_1 across the rho handle: conjugate tau_1, absorb into rho.

    With k = tau_1^-1 * rho sigma rho^-1 the image
    (k tau_1 k^-1, tau_2..tau_n, sigma, tau_1^-1 rho) is again valid.
    """
    taus = list(t.branch_perms)
    tau = taus[0]
    s, r = t.sigma, t.rho
    k = mul(mul(mul(inverse(tau), r), s), inverse(r))
    taus[0] = mul(mul(k, tau), inverse(k))
    new_rho = mul(inverse(tau), r)
    return HurwitzTuple(t.degree, tuple(taus), s, new_rho)


def rotation_move(t: HurwitzTuple) -> HurwitzTuple:
    """Carry tau_1 past the handle commutator: (tau_2,..,tau_n, K tau_1 K^-1)."""
    s, r = t.sigma, t.rho
    K = mul(mul(mul(s, r), inverse(s)), inverse(r))
    taus = list(t.branch_perms[1:])
    taus.append(mul(mul(K, t.branch_perms[0]), inverse(K)))
    return HurwitzTuple(t.degree, tuple(taus), s, r)


def move_neighbors(t: HurwitzTuple) -> list[HurwitzTuple]:
    out = []
    n = t.n
    for i in range(n - 1):
        out.append(braid_move(t, i))
    if n >= 1:
        out.append(slide_last_over_sigma(t))
        out.append(slide_first_over_rho(t))
        out.append(rotation_move(t))
    before = validate_tuple(t)
    for u in out:
        after = validate_tuple(u)
        if (after.relation_ok, after.transitive, after.simple) != (
            before.relation_ok,
            before.transitive,
            before.simple,
        ):
            raise AssertionError(f"move broke tuple invariants: {t} -> {u}")
    return out


def braid_orbits(classes: list[TupleClass], d: int, n: int) -> list[list[TupleClass]]:
    """Partition conjugation classes into orbits of the move set.

    Moves are bijections of a finite set, so forward closure over the
    undirected move graph yields the orbits of the generated group.
    """
    by_key = {c.representative.key(): c for c in classes}
    unvisited = set(by_key)
    orbits = []
    while unvisited:
        start = unvisited.pop()
        component = [start]
        frontier = [start]
        while frontier:
            key = frontier.pop()
            rep = by_key[key].representative
            for moved in move_neighbors(rep):
                mkey = canonical_form(moved)[0].key()
                if mkey in unvisited:
                    unvisited.discard(mkey)
                    component.append(mkey)
                    frontier.append(mkey)
        component.sort()
        orbits.append([by_key[k] for k in component])
    orbits.sort(key=lambda orb: orb[0].representative.key())
    return orbits
