"""Dart-based triangulations of closed oriented surfaces and the moves s1, s2, s3.

Dart ``3*t + s`` is side ``s`` of triangle ``t``; it runs from corner ``s`` to
corner ``s+1``.  A gluing of darts ``(t, s)`` and ``(u, r)`` always reverses
direction, so corner ``s`` of ``t`` meets corner ``r+1`` of ``u``.  Every
triangulation is therefore oriented by construction.

Corner ``3*t + i`` doubles as the dart leaving that corner, which makes the
rotation around a vertex easy to walk: from corner ``c`` cross the edge of
dart ``c`` and land on the corner after its partner.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import cached_property

from .trace import Move, MoveTrace

log = logging.getLogger(__name__)


class SurfaceError(ValueError):
    pass


def _nxt(d: int) -> int:
    return d - d % 3 + (d + 1) % 3


def _prv(d: int) -> int:
    return d - d % 3 + (d + 2) % 3


@dataclass(frozen=True)
class SurfaceTriangulation:
    triangle_count: int
    pairing: tuple[int, ...]

    def __post_init__(self):
        p = tuple(self.pairing)
        object.__setattr__(self, "pairing", p)
        if self.triangle_count < 1 or len(p) != 3 * self.triangle_count:
            raise SurfaceError("pairing must cover the three sides of every triangle")
        for d, q in enumerate(p):
            if not 0 <= q < len(p) or q == d or p[q] != d:
                raise SurfaceError(f"dart {d}: pairing is not a fixed-point-free involution")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_gluings(cls, n: int, gluings) -> "SurfaceTriangulation":
        pairing = [-1] * (3 * n)
        for (t1, s1), (t2, s2) in gluings:
            a, b = 3 * t1 + s1, 3 * t2 + s2
            if pairing[a] != -1 or pairing[b] != -1:
                raise SurfaceError(f"side glued twice: {t1}.{s1} or {t2}.{s2}")
            pairing[a], pairing[b] = b, a
        if -1 in pairing:
            raise SurfaceError("unglued side")
        return cls(n, tuple(pairing))

    @classmethod
    def two_triangle_torus(cls) -> "SurfaceTriangulation":
        return cls.from_gluings(2, [((0, s), (1, s)) for s in range(3)])

    # -- derived data ---------------------------------------------------------

    @cached_property
    def edge_of(self) -> tuple[int, ...]:
        """Edge id of every dart; edges are numbered by their smaller dart."""
        ids = {}
        out = []
        for d, q in enumerate(self.pairing):
            key = min(d, q)
            ids.setdefault(key, len(ids))
            out.append(ids[key])
        return tuple(out)

    @property
    def edge_count(self) -> int:
        return len(self.pairing) // 2

    def edge_darts(self, e: int) -> tuple[int, int]:
        d = self.edge_of.index(e)
        return d, self.pairing[d]

    def next_corner(self, c: int) -> int:
        return _nxt(self.pairing[c])

    @cached_property
    def vertex_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Corners around each vertex in rotation order; vertices numbered by smallest corner."""
        seen = [False] * len(self.pairing)
        orbits = []
        for c in range(len(self.pairing)):
            if seen[c]:
                continue
            orb = []
            x = c
            while not seen[x]:
                seen[x] = True
                orb.append(x)
                x = self.next_corner(x)
            orbits.append(tuple(orb))
        return tuple(orbits)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        out = [0] * len(self.pairing)
        for v, orb in enumerate(self.vertex_orbits):
            for c in orb:
                out[c] = v
        return tuple(out)

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_orbits)

    def valence(self, v: int) -> int:
        return len(self.vertex_orbits[v])

    def valences(self) -> list[int]:
        return [len(o) for o in self.vertex_orbits]

    def edge_ends(self, e: int) -> tuple[int, int]:
        d = self.edge_darts(e)[0]
        return self.vertex_of[d], self.vertex_of[_nxt(d)]

    def is_loop(self, e: int) -> bool:
        a, b = self.edge_ends(e)
        return a == b

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.triangle_count

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for s in range(3):
                u = self.pairing[3 * t + s] // 3
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.triangle_count

    def is_torus(self) -> bool:
        return self.is_connected() and self.euler_characteristic() == 0

    def incident_edges(self, v: int) -> list[int]:
        """Edges at ``v`` in rotation order; a loop appears once per end."""
        return [self.edge_of[c] for c in self.vertex_orbits[v]]

    def neighbours(self, v: int) -> list[int]:
        return [self.vertex_of[_nxt(c)] for c in self.vertex_orbits[v]]

    # -- canonical form ---------------------------------------------------------

    def _relabel_from(self, start: int) -> tuple[int, ...]:
        # BFS; each triangle is rotated so that the side it was reached by is side 0
        order = {start // 3: 0}
        rot = {start // 3: start % 3}
        queue = [start // 3]
        for t in queue:
            for k in range(3):
                q = self.pairing[3 * t + (rot[t] + k) % 3]
                u = q // 3
                if u not in order:
                    order[u] = len(order)
                    rot[u] = q % 3
                    queue.append(u)
        out = [0] * len(self.pairing)
        for t, nt in order.items():
            for k in range(3):
                q = self.pairing[3 * t + (rot[t] + k) % 3]
                u = q // 3
                out[3 * nt + k] = 3 * order[u] + (q % 3 - rot[u]) % 3
        return tuple(out)

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        """Lexicographically least pairing over orientation-preserving relabelings."""
        if not self.is_connected():
            raise SurfaceError("canonical form is defined for connected surfaces")
        return min(self._relabel_from(d) for d in range(len(self.pairing)))

    def isomorphic(self, other: "SurfaceTriangulation") -> bool:
        return self.triangle_count == other.triangle_count and self.canonical == other.canonical

    # -- text format -------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"triangles {self.triangle_count}"]
        for d, q in enumerate(self.pairing):
            if d < q:
                lines.append(f"glue {d // 3}.{d % 3} {q // 3}.{q % 3}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "SurfaceTriangulation":
        n = None
        gluings = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if tok[0] == "triangles" and len(tok) == 2:
                    n = int(tok[1])
                elif tok[0] == "glue" and len(tok) == 3:
                    a, b = (tuple(int(x) for x in t.split(".")) for t in tok[1:])
                    gluings.append((a, b))
                else:
                    raise ValueError
            except ValueError:
                raise SurfaceError(f"cannot parse surface line {raw!r}") from None
        if n is None:
            raise SurfaceError("missing 'triangles N' header")
        return cls.from_gluings(n, gluings)


# -- moves ---------------------------------------------------------------------
#
# Each private move returns the new triangulation and a map from surviving old
# darts to their new positions; the fill construction tracks darts through it.


def _rebuild(tri: SurfaceTriangulation, n_new: int, dmap: dict[int, int],
             extra: list[tuple[int, int]]) -> SurfaceTriangulation:
    pairing = [-1] * (3 * n_new)
    for d, nd in dmap.items():
        q = tri.pairing[d]
        if q in dmap:
            pairing[nd] = dmap[q]
    for a, b in extra:
        pairing[a], pairing[b] = b, a
    if -1 in pairing:
        raise AssertionError("move left an unglued side")
    return SurfaceTriangulation(n_new, tuple(pairing))


def s2_darts(tri: SurfaceTriangulation, e: int):
    d, q = tri.edge_darts(e)
    t, s = divmod(d, 3)
    u, r = divmod(q, 3)
    if t == u:
        raise SurfaceError(f"s2: both sides of edge {e} lie on triangle {t}")
    dmap = {x: x for x in range(len(tri.pairing)) if x // 3 not in (t, u)}
    # X = (C, A, D) in slot t, Y = (D, B, C) in slot u; sides 2 form the new diagonal
    dmap[3 * t + (s + 2) % 3] = 3 * t
    dmap[3 * u + (r + 1) % 3] = 3 * t + 1
    dmap[3 * u + (r + 2) % 3] = 3 * u
    dmap[3 * t + (s + 1) % 3] = 3 * u + 1
    new = _rebuild(tri, tri.triangle_count, dmap, [(3 * t + 2, 3 * u + 2)])
    return new, dmap


def _end_index(tri: SurfaceTriangulation, v: int, e: int) -> int:
    hits = [k for k, x in enumerate(tri.incident_edges(v)) if x == e]
    if not hits:
        raise SurfaceError(f"edge {e} is not incident to vertex {v}")
    if len(hits) > 1:
        raise SurfaceError(f"edge {e} is a loop at vertex {v}; s1 needs a non-loop edge")
    return hits[0]


def s1_darts(tri: SurfaceTriangulation, v: int, e1: int, e2: int):
    if e1 == e2:
        raise SurfaceError("s1 needs two distinct edges")
    if not 0 <= v < tri.vertex_count:
        raise SurfaceError(f"no vertex {v}")
    orb = tri.vertex_orbits[v]
    a, b = _end_index(tri, v, e1), _end_index(tri, v, e2)
    n = tri.triangle_count
    out_a, out_b = orb[a], orb[b]
    in_a1, in_b1 = tri.pairing[out_a], tri.pairing[out_b]
    A, B = 3 * n, 3 * (n + 1)
    # corners a+1..b stay with v1 (in A), corners b+1..a with v2 (in B)
    pairing = list(tri.pairing) + [-1] * 6
    for p, q in [(A, in_a1), (A + 1, B + 1), (A + 2, out_b), (B, in_b1), (B + 2, out_a)]:
        pairing[p], pairing[q] = q, p
    dmap = {x: x for x in range(len(tri.pairing))}
    return SurfaceTriangulation(n + 2, tuple(pairing)), dmap


def s3_darts(tri: SurfaceTriangulation, v: int):
    if not 0 <= v < tri.vertex_count:
        raise SurfaceError(f"no vertex {v}")
    orb = tri.vertex_orbits[v]
    if len(orb) != 3:
        raise SurfaceError(f"s3: vertex {v} has valence {len(orb)}, need 3")
    tris = [c // 3 for c in orb]
    edges = [tri.edge_of[c] for c in orb]
    if len(set(tris)) != 3 or len(set(edges)) != 3:
        raise SurfaceError(f"s3: vertex {v} does not see 3 distinct triangles and edges")
    opp = [3 * (c // 3) + (c % 3 + 1) % 3 for c in orb]
    t0 = tris[0]
    gone = set(tris[1:])
    slot = {}
    for t in range(tri.triangle_count):
        if t not in gone:
            slot[t] = len(slot)
    dmap = {}
    for x in range(len(tri.pairing)):
        if x // 3 not in tris:
            dmap[x] = 3 * slot[x // 3] + x % 3
    nt = slot[t0]
    dmap[opp[0]] = 3 * nt
    dmap[opp[2]] = 3 * nt + 1
    dmap[opp[1]] = 3 * nt + 2
    return _rebuild(tri, tri.triangle_count - 2, dmap, []), dmap


def split_darts(tri: SurfaceTriangulation, t: int):
    """Inverse of s3: cone a new vertex inside triangle ``t``."""
    if not 0 <= t < tri.triangle_count:
        raise SurfaceError(f"no triangle {t}")
    n = tri.triangle_count
    dmap = {x: x for x in range(len(tri.pairing)) if x // 3 != t}
    dmap[3 * t] = 3 * t
    dmap[3 * t + 1] = 3 * n
    dmap[3 * t + 2] = 3 * (n + 1)
    ta, tb, tc = 3 * t, 3 * n, 3 * (n + 1)
    extra = [(ta + 1, tb + 2), (tb + 1, tc + 2), (tc + 1, ta + 2)]
    return _rebuild(tri, n + 2, dmap, extra), dmap


def _check_counts(old: SurfaceTriangulation, new: SurfaceTriangulation, df: int, dv: int, de: int):
    got = (new.triangle_count - old.triangle_count, new.vertex_count - old.vertex_count,
           new.edge_count - old.edge_count)
    if got != (df, dv, de):
        raise AssertionError(f"move changed (F, V, E) by {got}, expected {(df, dv, de)}")


def apply_s1(tri: SurfaceTriangulation, v: int, e1: int, e2: int) -> SurfaceTriangulation:
    new = s1_darts(tri, v, e1, e2)[0]
    _check_counts(tri, new, 2, 1, 3)
    return new


def apply_s2(tri: SurfaceTriangulation, e: int) -> SurfaceTriangulation:
    if not 0 <= e < tri.edge_count:
        raise SurfaceError(f"no edge {e}")
    new = s2_darts(tri, e)[0]
    _check_counts(tri, new, 0, 0, 0)
    return new


def apply_s3(tri: SurfaceTriangulation, v: int) -> SurfaceTriangulation:
    new = s3_darts(tri, v)[0]
    _check_counts(tri, new, -2, -1, -3)
    return new


def split_triangle(tri: SurfaceTriangulation, t: int) -> SurfaceTriangulation:
    return split_darts(tri, t)[0]


def s1prime_moves(tri: SurfaceTriangulation, v: int) -> tuple[Move, Move]:
    """The (s1, s2) pair making up s1' at a valence-2 vertex."""
    if not 0 <= v < tri.vertex_count or tri.valence(v) != 2:
        raise SurfaceError(f"s1p: vertex {v} must have valence 2")
    e1, e2 = tri.incident_edges(v)
    mid = s1_darts(tri, v, e1, e2)[0]
    diag = mid.edge_of[3 * tri.triangle_count + 1]
    return Move("s1", (v, e1, e2)), Move("s2", (diag,))


def apply_s1prime(tri: SurfaceTriangulation, v: int) -> SurfaceTriangulation:
    m1, m2 = s1prime_moves(tri, v)
    return apply_s2(apply_s1(tri, *m1.params), *m2.params)


def apply_surface_move(tri: SurfaceTriangulation, move: Move) -> SurfaceTriangulation:
    p = move.params
    if move.kind == "s1":
        return apply_s1(tri, *p)
    if move.kind == "s2":
        return apply_s2(tri, *p)
    if move.kind == "s3":
        return apply_s3(tri, *p)
    if move.kind == "s1p":
        return apply_s1prime(tri, *p)
    raise SurfaceError(f"unknown surface move {move.kind!r}")


def replay_surface(tri: SurfaceTriangulation, trace, check=None) -> SurfaceTriangulation:
    for mv in trace:
        tri = apply_surface_move(tri, mv)
        if check is not None:
            check(tri)
    return tri


# -- simplification to two triangles -------------------------------------------


@dataclass(frozen=True)
class SimplifyStep:
    case: str
    moves: tuple[Move, ...]
    # (#valence-1, #valence-2, #vertices) before the step
    measure: tuple[int, int, int]


def _measure(tri: SurfaceTriangulation) -> tuple[int, int, int]:
    val = tri.valences()
    return val.count(1), val.count(2), tri.vertex_count


def _has_loop(tri: SurfaceTriangulation, v: int) -> bool:
    return any(tri.is_loop(e) for e in tri.incident_edges(v))


def _ok(tri: SurfaceTriangulation) -> bool:
    return tri.triangle_count == 2 or min(tri.valences()) >= 3


def _run(tri: SurfaceTriangulation, moves) -> SurfaceTriangulation:
    return replay_surface(tri, moves)


def _case_valence1(tri: SurfaceTriangulation, v: int) -> list[Move]:
    (c,) = tri.vertex_orbits[v]
    e = tri.edge_of[_nxt(c)]  # the side of v's triangle facing away from v
    flipped, dmap = s2_darts(tri, e)
    nv = flipped.vertex_of[dmap[c]]
    if flipped.valence(nv) != 2:
        raise AssertionError("valence-1 removal: flip did not produce a valence-2 vertex")
    return [Move("s2", (e,)), Move("s1p", (nv,))]


def _case_31b(tri: SurfaceTriangulation, v: int, v1: int) -> list[Move] | None:
    """Flip the edge opposite ``v1`` in its triangle not containing ``v``, then s3 at ``v``.

    Returns None when the resulting valences drop below 3.
    """
    orb1 = tri.vertex_orbits[v1]
    tris_v = {c // 3 for c in tri.vertex_orbits[v]}
    far = [c for c in orb1 if c // 3 not in tris_v]
    if len(far) != 1:
        return None
    c = far[0]
    e = tri.edge_of[_nxt(c)]
    anchor = tri.vertex_orbits[v][0]
    try:
        flipped, dmap = s2_darts(tri, e)
        nv = flipped.vertex_of[dmap[anchor]]
        moves = [Move("s2", (e,)), Move("s3", (nv,))]
        out = _run(tri, moves)
    except (SurfaceError, KeyError):
        return None
    return moves if _ok(out) else None


def _case_32a(tri: SurfaceTriangulation, v: int) -> list[Move] | None:
    """Flip e_2..e_{k-2} around ``v`` then s3; try every starting edge until valences stay >= 3."""
    k = tri.valence(v)
    for start in range(k):
        cur = tri
        anchor = tri.vertex_orbits[v][start]
        moves = []
        try:
            for _ in range(k - 3):
                vv = cur.vertex_of[anchor]
                orb = cur.vertex_orbits[vv]
                i = orb.index(anchor)
                e = cur.edge_of[orb[(i + 1) % len(orb)]]
                cur, dmap = s2_darts(cur, e)
                anchor = dmap[anchor]
                moves.append(Move("s2", (e,)))
            moves.append(Move("s3", (cur.vertex_of[anchor],)))
            cur = apply_s3(cur, cur.vertex_of[anchor])
        except (SurfaceError, KeyError):
            continue
        if _ok(cur):
            return moves
    return None


def _search_reduction(tri: SurfaceTriangulation, depth: int = 3,
                      max_valence: int | None = 4) -> list[Move] | None:
    """Bounded search: up to ``depth`` flips followed by one s3, keeping valences >= 3.

    With ``max_valence`` set, flips are restricted to edges touching a vertex
    of at most that valence.
    """
    frontier = [(tri, [])]
    seen = {tri.pairing}
    for level in range(depth + 1):
        nxt = []
        for cur, moves in frontier:
            val = cur.valences()
            for v in range(cur.vertex_count):
                if val[v] != 3:
                    continue
                try:
                    out = apply_s3(cur, v)
                except SurfaceError:
                    continue
                if _ok(out):
                    return moves + [Move("s3", (v,))]
            if level == depth:
                continue
            low = {v for v in range(cur.vertex_count) if max_valence is None or val[v] <= max_valence}
            for e in range(cur.edge_count):
                if not low & set(cur.edge_ends(e)):
                    continue
                try:
                    out = s2_darts(cur, e)[0]
                except SurfaceError:
                    continue
                if out.pairing not in seen:
                    seen.add(out.pairing)
                    nxt.append((out, moves + [Move("s2", (e,))]))
        frontier = nxt
    return None


def simplify_steps(tri: SurfaceTriangulation) -> list[SimplifyStep]:
    """Case-by-case reduction of a torus triangulation to two triangles."""
    if not tri.is_torus():
        raise SurfaceError("simplify_torus needs a connected triangulated torus")
    steps: list[SimplifyStep] = []
    budget = 50 * tri.triangle_count + 50
    while tri.triangle_count > 2:
        budget -= 1
        if budget < 0:
            raise RuntimeError("simplify_torus did not terminate")
        val = tri.valences()
        before = _measure(tri)
        if 1 in val:
            case, moves = "1", _case_valence1(tri, val.index(1))
        elif 2 in val:
            case, moves = "2", [Move("s1p", (val.index(2),))]
        elif 3 in val:
            threes = [v for v in range(tri.vertex_count) if val[v] == 3]
            good = [v for v in threes if all(val[w] >= 4 for w in tri.neighbours(v))]
            if good:
                case, moves = "3.1.a", [Move("s3", (good[0],))]
            else:
                case, moves = "3.1.b", None
                for v in threes:
                    for v1 in sorted(set(tri.neighbours(v))):
                        if moves is None and val[v1] == 3 and v1 != v:
                            moves = _case_31b(tri, v, v1)
                if moves is None:
                    # the neighbour-valence bound failed for every adjacent pair
                    log.warning("case 3.1.b bound violated (valences %s); searching", val)
                    case, moves = "3.1.b-search", (_search_reduction(tri) or _search_reduction(tri, 2, None)
                                                    or _search_reduction(tri, 3, None))
        else:
            free = [v for v in range(tri.vertex_count) if not _has_loop(tri, v)]
            moves = None
            if free:
                v = min(free, key=lambda x: (val[x], x))
                case, moves = "3.2.a", _case_32a(tri, v)
            if moves is None:
                # the loop ladder: two flips then s3, up to pre-flips of square diagonals
                case, moves = "3.2.b", _search_reduction(tri, 2, None) or _search_reduction(tri, 3, None)
        if moves is None:
            raise RuntimeError(f"case {case}: no reducing move sequence found")
        tri = _run(tri, moves)
        steps.append(SimplifyStep(case, tuple(moves), before))
        if not tri.is_torus():
            raise AssertionError(f"case {case} produced a non-torus")
    return steps


def simplify_torus(tri: SurfaceTriangulation) -> MoveTrace:
    steps = simplify_steps(tri)
    moves, notes = [], []
    for st in steps:
        for mv in st.moves:
            moves.append(mv)
            notes.append((st.case, st.measure))
    return MoveTrace.from_moves(moves, notes)


# -- theta curve and random generation ----------------------------------------


@dataclass(frozen=True)
class ThetaCurve:
    edges: tuple[int, int, int]
    # the cyclic sequence of edges seen by each of the two dual vertices
    orders: tuple[tuple[int, int, int], tuple[int, int, int]]


def theta_dual(tri: SurfaceTriangulation) -> ThetaCurve:
    if tri.triangle_count != 2 or tri.vertex_count != 1:
        raise SurfaceError("theta_dual needs a one-vertex two-triangle torus")
    orders = tuple(tuple(tri.edge_of[3 * t + s] for s in range(3)) for t in range(2))
    return ThetaCurve((0, 1, 2), orders)


def random_torus(rng: random.Random, steps: int, max_triangles: int = 30) -> SurfaceTriangulation:
    """Random moves (inverse s3, s1, s2) starting from the two-triangle torus."""
    tri = SurfaceTriangulation.two_triangle_torus()
    for _ in range(steps):
        grow = tri.triangle_count + 2 <= max_triangles
        kind = rng.choice(["split", "s1", "s2"] if grow else ["s2"])
        if kind == "split":
            tri = split_triangle(tri, rng.randrange(tri.triangle_count))
        elif kind == "s2":
            e = rng.randrange(tri.edge_count)
            d, q = tri.edge_darts(e)
            if d // 3 != q // 3:
                tri = apply_s2(tri, e)
        else:
            v = rng.randrange(tri.vertex_count)
            cand = sorted({e for e in tri.incident_edges(v) if not tri.is_loop(e)})
            if len(cand) >= 2:
                e1, e2 = rng.sample(cand, 2)
                tri = apply_s1(tri, v, e1, e2)
    return tri
