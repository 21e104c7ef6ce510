"""Combinatorial branched covers of the torus and their homology.

The base torus is a one-vertex square complex: edges ``gamma`` and
``delta`` (the square's sides) plus one slit edge per branch point, so
the surface relation is the boundary word of the single 2-cell.  The
cover glues d copies of that polygon: crossing slit i changes sheet by
tau_i, crossing the gamma edge by sigma, the delta edge by rho.

Homology is computed exactly over Z: the cover complex is reduced to a
one-vertex, one-face polygon (face merges, then edge contractions); the
surviving edges give a basis of H_1 whose intersection numbers come from
chord crossings in the vertex rotation.  All reductions are tracked so
cycles can be mapped between the original and reduced complexes.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import intlinalg as ila
from .hurwitz import (
    HurwitzTuple,
    genus_of_cover,
    identity_perm,
    inverse,
    validate_tuple,
)
from .skewforms import PolarizationType, SkewLattice, alternating_divisors

GAMMA = "gamma"
DELTA = "delta"

# Crossing a dart from its left side to its right side acts on sheets by
# tau_i (slits), sigma (gamma edge), rho^-1 (delta edge).  The delta
# inversion makes the holonomy around the base vertex equal the surface
# relation as a function, so valid tuples are unbranched over the vertex.

# Orientation of the derived vertex rotation used for chord crossings;
# fixed by the requirement <gamma, delta> = +1 on the base torus.
_ROTATION_SIGN = -1


def _base_face_word(n: int):
    word = []
    for i in range(1, n + 1):
        word.append((f"s{i}", 1))
        word.append((f"s{i}", -1))
    word += [(GAMMA, 1), (DELTA, 1), (GAMMA, -1), (DELTA, -1)]
    return word


@dataclass(frozen=True)
class RibbonSurface:
    """Oriented combinatorial surface of a branched cover.

    Darts are ``(base_edge, orientation, sheet)`` triples; the edge named
    ``(base_edge, k)`` is the lift whose positive dart has sheet ``k`` on
    its left.  Faces are the orbits of rotation followed by involution.
    """

    degree: int
    n_branch: int
    darts: tuple
    vertex_rotation: dict
    edge_involution: dict
    faces: tuple
    vertices: tuple
    projection: dict
    cross: dict  # base edge -> sheet permutation for left-to-right crossing

    @property
    def edge_keys(self):
        return sorted({(e, k) for (e, o, k) in self.darts if o == 1})

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.darts) // 2 + len(self.faces)

    @property
    def genus(self) -> int:
        chi = self.euler_characteristic
        if chi % 2:
            raise AssertionError("odd Euler characteristic on a closed surface")
        return (2 - chi) // 2


def _dart_edge(dart, cross):
    """Edge key and sign of a cover dart."""
    e, o, k = dart
    if o == 1:
        return (e, k), 1
    mu = cross[e]
    return (e, inverse(mu)[k]), -1


def build_cover_surface(t: HurwitzTuple) -> RibbonSurface:
    """Slit-polygon cover: d sheets of the base square glued by the monodromy."""
    report = validate_tuple(t)
    if not report.relation_ok:
        raise ValueError("tuple does not satisfy the surface relation")
    if not report.transitive:
        raise ValueError("cover is disconnected; refusing to build the surface")
    d, n = t.degree, t.n
    cross = {f"s{i + 1}": t.branch_perms[i] for i in range(n)}
    cross[GAMMA] = t.sigma
    cross[DELTA] = inverse(t.rho)

    base_word = _base_face_word(n)
    faces = []
    darts = []
    for k in range(d):
        face = tuple((e, o, k) for (e, o) in base_word)
        faces.append(face)
        darts.extend(face)

    involution = {}
    for e, mu in cross.items():
        mu_inv = inverse(mu)
        for k in range(d):
            involution[(e, 1, k)] = (e, -1, mu[k])
            involution[(e, -1, k)] = (e, 1, mu_inv[k])

    face_next = {}
    for face in faces:
        for a, b in zip(face, face[1:] + face[:1]):
            face_next[a] = b

    rotation = {dart: face_next[involution[dart]] for dart in darts}

    vertices = _orbits(darts, rotation)
    projection = {(e, o, k): (e, o) for (e, o, k) in darts}

    surface = RibbonSurface(
        degree=d,
        n_branch=n,
        darts=tuple(darts),
        vertex_rotation=rotation,
        edge_involution=involution,
        faces=tuple(faces),
        vertices=tuple(vertices),
        projection=projection,
        cross=cross,
    )
    _check_surface(surface, t)
    return surface


def _orbits(elements, perm):
    seen = set()
    out = []
    for x in elements:
        if x in seen:
            continue
        orbit = [x]
        seen.add(x)
        y = perm[x]
        while y != x:
            orbit.append(y)
            seen.add(y)
            y = perm[y]
        out.append(tuple(orbit))
    return out


def _check_surface(s: RibbonSurface, t: HurwitzTuple):
    g = genus_of_cover(t)
    if s.euler_characteristic != 2 - 2 * g:
        raise AssertionError(
            f"Euler characteristic {s.euler_characteristic} != {2 - 2 * g}"
        )
    # fibers: d sheets over the base vertex, one vertex per cycle of tau_i
    over_v0 = sum(1 for v in s.vertices if _vertex_base(v) == "v0")
    if over_v0 != t.degree:
        raise AssertionError("wrong number of vertices over the base point")


def _vertex_base(vertex_orbit):
    # tail of a dart (e, 1, k) is over v0, of (s_i, -1, k) over the branch point
    e, o, _ = vertex_orbit[0]
    if o == 1 or e in (GAMMA, DELTA):
        return "v0"
    return e


# ---------------------------------------------------------------------------
# homology of the reduced polygon


@dataclass(frozen=True)
class HomologyData:
    rank: int
    edges: tuple            # ordered edge keys of the cover complex
    cycle_basis: tuple      # rank x len(edges) integer vectors
    intersection: tuple     # rank x rank Gram matrix J
    push: tuple             # 2 x rank matrix to H_1 of the base
    pull: tuple             # rank x 2 matrix lifting base loops

    def intersection_rows(self):
        return [list(r) for r in self.intersection]

    def push_rows(self):
        return [list(r) for r in self.push]

    def pull_rows(self):
        return [list(r) for r in self.pull]


class _ReducedComplex:
    """One-face polygon with substitution tracking back to the cover complex."""

    def __init__(self, surface: RibbonSurface):
        self.surface = surface
        cross = surface.cross
        self.face_words = []
        boundaries = []
        for face in surface.faces:
            word = [_dart_edge(dart, cross) for dart in face]
            self.face_words.append(word)
            chain = {}
            for edge, sign in word:
                chain[edge] = chain.get(edge, 0) + sign
            boundaries.append(chain)
        self.substitutions = []  # (edge, replacement chain) in application order
        self.vertex_of = {}
        for idx, v in enumerate(surface.vertices):
            for dart in v:
                self.vertex_of[dart] = idx
        self.parent = list(range(len(surface.vertices)))
        self.tree = {}  # contracted edge -> (tail class at time, head class)
        self.tree_adj = {i: [] for i in range(len(surface.vertices))}
        self._merge_faces()
        self._contract_edges()

    # -- face merging --------------------------------------------------

    def _merge_faces(self):
        while len(self.face_words) > 1:
            loc = {}
            merged = False
            for fi, word in enumerate(self.face_words):
                for pos, (edge, sign) in enumerate(word):
                    if edge in loc:
                        fj, pos_j, sign_j = loc[edge]
                        if fj != fi:
                            self._splice(fj, pos_j, sign_j, fi, pos, sign, edge)
                            merged = True
                            break
                    else:
                        loc[edge] = (fi, pos, sign)
                if merged:
                    break
            if not merged:
                raise AssertionError("face graph disconnected; cover should be connected")

    def _splice(self, fa, pa, sa, fb, pb, sb, edge):
        words = self.face_words
        A = words[fa]
        B = words[fb]
        if sa == -1:
            # keep the +1 occurrence inside A for the substitution below
            fa, pa, sa, fb, pb, sb = fb, pb, sb, fa, pa, sa
            A, B = B, A
        # rotate A so its (edge,+1) is last, B so its (edge,-1) is first
        A = A[pa + 1:] + A[:pa + 1]
        B = B[pb:] + B[:pb]
        assert A[-1] == (edge, 1) and B[0] == (edge, -1)
        rest = A[:-1]
        repl = {}
        for e, s in rest:
            repl[e] = repl.get(e, 0) - s
        repl.pop(edge, None)
        self.substitutions.append((edge, repl))
        merged = rest + B[1:]
        new_words = [w for i, w in enumerate(self.face_words) if i not in (fa, fb)]
        new_words.append(merged)
        self.face_words = new_words

    # -- edge contraction ----------------------------------------------

    def _find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def _edge_endpoints_raw(self, edge):
        # tail vertex of the positive dart, tail vertex of the negative dart
        e, k = edge
        pos_dart = (e, 1, k)
        neg_dart = self.surface.edge_involution[pos_dart]
        return self.vertex_of[pos_dart], self.vertex_of[neg_dart]

    def _contract_edges(self):
        word = self.face_words[0]
        while True:
            classes = {self._find(v) for v in range(len(self.parent))}
            if len(classes) == 1:
                break
            target = None
            for edge, _sign in word:
                ra, rb = self._edge_endpoints_raw(edge)
                if self._find(ra) != self._find(rb):
                    target = (edge, ra, rb)
                    break
            if target is None:
                raise AssertionError("no contractible edge but several vertices remain")
            edge, ra, rb = target
            self.substitutions.append((edge, {}))
            # the contraction forest lives on raw vertex indices
            self.tree_adj[ra].append((edge, rb, 1))  # tail -> head traversal is +edge
            self.tree_adj[rb].append((edge, ra, -1))
            self.parent[self._find(rb)] = self._find(ra)
            word = [w for w in word if w[0] != edge]
        self.word = word

    # -- chain maps ------------------------------------------------------

    def reduce_chain(self, chain: dict) -> dict:
        out = dict(chain)
        for edge, repl in self.substitutions:
            c = out.pop(edge, 0)
            if c:
                for e, s in repl.items():
                    out[e] = out.get(e, 0) + c * s
        return {e: c for e, c in out.items() if c}

    def tree_path(self, start, goal) -> dict:
        """Edge chain through contracted edges from vertex start to goal."""
        if start == goal:
            return {}
        prev = {start: None}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for edge, w, sign in self.tree_adj[v]:
                    if w not in prev:
                        prev[w] = (v, edge, sign)
                        nxt.append(w)
            frontier = nxt
            if goal in prev:
                break
        if goal not in prev:
            raise AssertionError("vertices not connected through the contraction forest")
        chain = {}
        v = goal
        while prev[v] is not None:
            u, edge, sign = prev[v]
            chain[edge] = chain.get(edge, 0) + sign
            v = u
        return chain


def _interleave_sign(p1, q1, p2, q2, size):
    """Crossing sign of chords (p1->q1) and (p2->q2) on a circle of darts."""
    def rel(z):
        return (z - p1) % size
    b1 = rel(q1)
    a2, b2 = rel(p2), rel(q2)
    in1 = 0 < a2 < b1
    in2 = 0 < b2 < b1
    if in1 == in2:
        return 0
    return 1 if in1 else -1


def homology(obj) -> HomologyData:
    """Exact integral homology package of a connected branched cover."""
    surface = obj if isinstance(obj, RibbonSurface) else build_cover_surface(obj)
    g = surface.genus
    red = _ReducedComplex(surface)
    word = red.word

    surviving = []
    for edge, _ in word:
        if edge not in surviving:
            surviving.append(edge)
    if len(word) != 4 * g or len(surviving) != 2 * g:
        raise AssertionError("reduced polygon has the wrong size")

    # vertex rotation of the single remaining vertex, from the face word
    darts = []
    for edge, sign in word:
        darts.append((edge, sign))
    next_in_face = {a: b for a, b in zip(darts, darts[1:] + darts[:1])}

    def invol(dart):
        return (dart[0], -dart[1])

    rotation_order = []
    if darts:
        start = darts[0]
        cur = start
        while True:
            rotation_order.append(cur)
            cur = next_in_face[invol(cur)]
            if cur == start:
                break
    if len(rotation_order) != len(darts):
        raise AssertionError("reduced complex does not have a single vertex")
    if _ROTATION_SIGN == -1:
        rotation_order.reverse()
    pos = {dart: i for i, dart in enumerate(rotation_order)}

    size = len(rotation_order)
    J = [[0] * (2 * g) for _ in range(2 * g)]
    for i, x in enumerate(surviving):
        for j, y in enumerate(surviving):
            if i == j:
                continue
            J[i][j] = _interleave_sign(
                pos[(x, -1)], pos[(x, 1)], pos[(y, -1)], pos[(y, 1)], size
            )

    # cycle basis in the original complex: surviving edge + path through the
    # contraction forest from its head back to its tail
    cycles = []
    for edge in surviving:
        e, k = edge
        pos_dart = (e, 1, k)
        neg_dart = surface.edge_involution[pos_dart]
        tail = red.vertex_of[pos_dart]
        head = red.vertex_of[neg_dart]
        chain = {edge: 1}
        for f, c in red.tree_path(head, tail).items():
            chain[f] = chain.get(f, 0) + c
        cycles.append(chain)
        reduced = red.reduce_chain(chain)
        if reduced != {edge: 1}:
            raise AssertionError("cycle basis does not reduce to the surviving edges")

    edges = tuple(sorted({(e, k) for (e, o, k) in surface.darts if o == 1}))
    edge_index = {e: i for i, e in enumerate(edges)}
    basis_vectors = []
    for chain in cycles:
        vec = [0] * len(edges)
        for e, c in chain.items():
            vec[edge_index[e]] = c
        basis_vectors.append(vec)

    # pushforward: project each basis cycle to the base homology (gamma, delta)
    push = [[0] * (2 * g) for _ in range(2)]
    for j, chain in enumerate(cycles):
        gsum = sum(c for (e, _k), c in chain.items() if e == GAMMA)
        dsum = sum(c for (e, _k), c in chain.items() if e == DELTA)
        ssum = {}
        for (e, _k), c in chain.items():
            if e not in (GAMMA, DELTA):
                ssum[e] = ssum.get(e, 0) + c
        if any(ssum.values()):
            raise AssertionError("projected cycle has slit coefficients")
        push[0][j] = gsum
        push[1][j] = dsum

    # pullback: the sum of the d lifts of gamma resp. delta, in basis coordinates
    pull_cols = []
    for base_edge in (GAMMA, DELTA):
        lift = {(base_edge, k): 1 for k in range(surface.degree)}
        coords = red.reduce_chain(lift)
        col = [coords.get(edge, 0) for edge in surviving]
        if set(coords) - set(surviving):
            raise AssertionError("lifted base loop did not reduce to basis coordinates")
        pull_cols.append(col)
    pull = [[pull_cols[0][i], pull_cols[1][i]] for i in range(2 * g)]

    data = HomologyData(
        rank=2 * g,
        edges=edges,
        cycle_basis=tuple(tuple(v) for v in basis_vectors),
        intersection=tuple(tuple(r) for r in J),
        push=tuple(tuple(r) for r in push),
        pull=tuple(tuple(r) for r in pull),
    )
    _check_homology(data, surface)
    return data


BASE_GRAM = ((0, 1), (-1, 0))  # <gamma, delta> = +1


def _check_homology(h: HomologyData, surface: RibbonSurface):
    d = surface.degree
    J = h.intersection_rows()
    if ila.det(J) != 1:
        raise AssertionError("intersection form is not unimodular with det +1")
    prod = ila.mat_mul(h.push_rows(), h.pull_rows())
    if not ila.mat_eq(prod, [[d, 0], [0, d]]):
        raise AssertionError("push . pull != degree * identity")
    left = ila.mat_mul(ila.transpose(h.pull_rows()), J)
    right = ila.mat_mul([list(r) for r in BASE_GRAM], h.push_rows())
    if not ila.mat_eq(left, right):
        raise AssertionError("pull/push adjointness fails")


# ---------------------------------------------------------------------------
# Prym data


def kernel_sublattice(h: HomologyData, matrix) -> SkewLattice:
    """Restriction of the intersection form to the kernel of an integer map."""
    K = ila.kernel_basis([list(r) for r in matrix])
    J = h.intersection_rows()
    r = len(K)
    gram = [[0] * r for _ in range(r)]
    for j in range(r):
        JKj = ila.mat_vec(J, K[j])
        for i in range(r):
            gram[i][j] = sum(a * b for a, b in zip(K[i], JKj))
    return SkewLattice.from_rows(gram)


def prym_lattice(t_or_h) -> SkewLattice:
    """Kernel of the pushforward with the restricted intersection form."""
    h = t_or_h if isinstance(t_or_h, HomologyData) else homology(t_or_h)
    return kernel_sublattice(h, h.push)


def prym_type(t_or_h) -> tuple[int, PolarizationType]:
    """Factor the restricted form's divisors as m * (1, d_2, ..., d_{g-1})."""
    L = prym_lattice(t_or_h)
    if not L.is_nondegenerate():
        raise ValueError("restricted form is degenerate; cover is malformed")
    chain = alternating_divisors(L)
    m = chain.divisors[0]
    normalized = PolarizationType(tuple(d // m for d in chain.divisors))
    return m, normalized


def raw_prym_divisors(t_or_h) -> tuple[int, ...]:
    """Unnormalized divisor chain of the restricted intersection form."""
    m, norm = prym_type(t_or_h)
    return tuple(m * d for d in norm.divisors)


def pushforward_cokernel(t_or_h) -> tuple[int, tuple[int, ...]]:
    """Order and cyclic decomposition of H_1(base) / push(H_1(cover))."""
    h = t_or_h if isinstance(t_or_h, HomologyData) else homology(t_or_h)
    invariants = ila.cokernel_invariants(h.push_rows())
    if any(v == 0 for v in invariants):
        raise AssertionError("pushforward is not of full rank")
    order = 1
    for v in invariants:
        order *= v
    return order, tuple(invariants)
