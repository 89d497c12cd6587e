"""Layered solid tori and the fill of a triangulated torus by a solid torus.

A layered solid torus starts from the one-tetrahedron complex whose two
boundary triangles form a one-vertex torus with edge weights 1, 2, 3 against
the meridian.  Layering a tetrahedron on a boundary edge replaces that edge by
the opposite diagonal of the square formed by the two boundary triangles.

``fill_solid_torus`` turns a torus triangulation together with a meridian into
an ideal triangulation of the solid torus whose boundary is exactly the given
torus: it replays the simplification to two triangles, adding one tetrahedron
per flip and per valence-3 removal and folding a triangle pair per split, and
closes the last two triangles with a layered solid torus.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Sequence

from .homology import DeltaComplex, primitive
from .ideal_tri import (IdealTriangulation, TriangulationError, boundary_surface,
                        complete_perm, face_corners)
from .surface_tri import (SurfaceError, SurfaceTriangulation, s1_darts, s1prime_moves,
                          s2_darts, s3_darts, simplify_torus)
from .trace import Move, MoveTrace

log = logging.getLogger(__name__)

Slope = tuple[int, int]


class FillError(ValueError):
    pass


# -- homology on one-vertex two-triangle tori -------------------------------------


def torus_coordinates(surf: SurfaceTriangulation) -> list[Slope]:
    """H1 coordinates of the edges of a one-vertex two-triangle torus.

    Edges are oriented along their lower dart.  The edges on sides 0 and 1 of
    triangle 0 form the basis; the third is fixed by the boundary of that
    triangle.
    """
    if surf.triangle_count != 2 or surf.vertex_count != 1:
        raise SurfaceError("coordinates need a one-vertex two-triangle torus")
    eps = []
    for s in range(3):
        d = s
        eps.append(1 if d < surf.pairing[d] else -1)
    ea, eb, ec = (surf.edge_of[s] for s in range(3))
    out: dict[int, Slope] = {ea: (1, 0), eb: (0, 1), ec: (-eps[2] * eps[0], -eps[2] * eps[1])}
    return [out[e] for e in range(3)]


def det(a: Slope, b: Slope) -> int:
    return a[0] * b[1] - a[1] * b[0]


def complex_of(tri: IdealTriangulation, key=lambda t: ("t", t)) -> DeltaComplex:
    dc = DeltaComplex()
    for t in range(tri.tet_count):
        dc.add(key(t), 4)
    for t, f, t2, p in tri.gluing_list():
        fc = face_corners(f)
        dc.glue(key(t), fc, key(t2), [p[v] for v in fc])
    return dc


def edge_chain(surf: SurfaceTriangulation, refs, e: int):
    """Chain of surface edge ``e`` through ``refs[tri] = (key, vertex per corner)``."""
    d, _ = surf.edge_darts(e)
    t, s = divmod(d, 3)
    key, vs = refs[t]
    return [(key, vs[s], vs[(s + 1) % 3], 1)]


def meridian_on(dc: DeltaComplex, surf: SurfaceTriangulation, refs) -> Slope:
    """Primitive class of the two-triangle torus ``surf`` that dies in ``dc``."""
    coords = torus_coordinates(surf)
    cols = [dc.edge_vector(edge_chain(surf, refs, e)) for e in range(3)]
    for alpha in dc.nullspace_with(cols):
        x = sum(a * c[0] for a, c in zip(alpha, coords))
        y = sum(a * c[1] for a, c in zip(alpha, coords))
        if x or y:
            return primitive((x, y))
    raise FillError("no boundary class dies in the filling")


def boundary_refs(tri: IdealTriangulation):
    bs = boundary_surface(tri)
    return bs.surface, [(("t", t), cs) for t, _, cs in bs.faces]


def homology_weights(tri: IdealTriangulation) -> tuple[int, ...]:
    """Edge weights of the boundary torus against the meridian, from homology."""
    surf, refs = boundary_refs(tri)
    mu = meridian_on(complex_of(tri), surf, refs)
    return tuple(abs(det(mu, c)) for c in torus_coordinates(surf))


# -- layered solid tori ----------------------------------------------------------------

BASE_SLOPES = {1: (1, 0), 2: (2, 1), 3: (3, 1)}
MERIDIAN: Slope = (0, 1)


@dataclass(frozen=True)
class LayeredTrace:
    """A layered solid torus: the complex, the edges layered on, boundary slopes.

    ``slopes[e]`` is the slope of boundary edge ``e`` in coordinates where the
    meridian is (0, 1), so the weight of an edge is the absolute value of its
    first coordinate.
    """

    complex: IdealTriangulation
    layerings: tuple[int, ...]
    slopes: tuple[Slope, Slope, Slope]

    @cached_property
    def boundary(self):
        return boundary_surface(self.complex)

    @property
    def weights(self) -> tuple[int, int, int]:
        return tuple(abs(s[0]) for s in self.slopes)

    def _class_rep(self, e: int):
        d, _ = self.boundary.surface.edge_darts(e)
        t, s = divmod(d, 3)
        tet, _, cs = self.boundary.faces[t]
        return tet, cs[s], cs[(s + 1) % 3]


def base_lst() -> LayeredTrace:
    """One tetrahedron, face 012 glued to face 123 by 0->1, 1->2, 2->3."""
    tri = IdealTriangulation.from_gluings(1, [(0, 3, 0, (1, 2, 3, 0))])
    w = homology_weights(tri)
    if sorted(w) != [1, 2, 3]:
        raise AssertionError(f"base solid torus has weights {w}")
    return LayeredTrace(tri, (), tuple(BASE_SLOPES[x] for x in w))


def layer(lst: LayeredTrace, e: int) -> LayeredTrace:
    """Layer a tetrahedron on boundary edge ``e``."""
    bs = lst.boundary
    surf = bs.surface
    if not 0 <= e < surf.edge_count:
        raise SurfaceError(f"no boundary edge {e}")
    d, q = surf.edge_darts(e)
    t, s = divmod(d, 3)
    u, r = divmod(q, 3)
    k = lst.complex.tet_count
    tt, ft, ct = bs.faces[t]
    tu, fu, cu = bs.faces[u]
    # new tetrahedron: A=0, B=1, C=2 on t and A=0, B=1, D=3 on u
    glue_t = complete_perm({0: ct[s], 1: ct[(s + 1) % 3], 2: ct[(s + 2) % 3]})
    glue_u = complete_perm({0: cu[(r + 1) % 3], 1: cu[r], 3: cu[(r + 2) % 3]})
    new = IdealTriangulation.from_gluings(
        k + 1, lst.complex.gluing_list() + [(k, 3, tt, glue_t), (k, 2, tu, glue_u)])
    # carry slopes over by edge class
    old_slope = {}
    for i in range(3):
        tet, a, b = lst._class_rep(i)
        old_slope[new.edge_of(tet, a, b)] = lst.slopes[i]
    gone = lst.slopes[e]
    keep = [lst.slopes[i] for i in range(3) if i != e]
    plus = (keep[0][0] + keep[1][0], keep[0][1] + keep[1][1])
    minus = (keep[0][0] - keep[1][0], keep[0][1] - keep[1][1])
    fresh = minus if plus in (gone, (-gone[0], -gone[1])) else plus
    out = LayeredTrace(new, lst.layerings + (e,), ((0, 0),) * 3)
    slopes = []
    for i in range(3):
        tet, a, b = out._class_rep(i)
        slopes.append(old_slope.get(new.edge_of(tet, a, b), fresh))
    if slopes.count(fresh) != 1:
        raise AssertionError("layering did not produce exactly one new boundary edge")
    return LayeredTrace(new, out.layerings, tuple(slopes))


def replay_layers(layerings: Sequence[int]) -> LayeredTrace:
    lst = base_lst()
    for e in layerings:
        lst = layer(lst, e)
    return lst


# -- realizing a prescribed theta curve ---------------------------------------------------


def check_slope_triple(slopes: Sequence[Slope]) -> tuple[Slope, Slope, Slope]:
    """Validate three boundary slopes of a one-vertex torus (meridian = (0, 1))."""
    if len(slopes) != 3:
        raise FillError("need three slopes")
    out = tuple((int(a), int(b)) for a, b in slopes)
    for a, b in out:
        if gcd(a, b) != 1:
            raise FillError(f"slope {(a, b)} is not primitive")
    for p, q in itertools.combinations(out, 2):
        if abs(det(p, q)) != 1:
            raise FillError(f"non-unimodular triple: det{p, q} = {det(p, q)}")
    return out


def layering_distance(weights: Sequence[int], max_weight: int | None = None) -> int | None:
    """Fewest layerings from the base solid torus to ``weights`` (as a multiset), by BFS."""
    goal = tuple(sorted(weights))
    cap = max_weight if max_weight is not None else max(goal)
    start = (1, 2, 3)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if w == goal:
            return dist[w]
        for i in range(3):
            j, k = (x for x in range(3) if x != i)
            total, diff = w[j] + w[k], abs(w[j] - w[k])
            new = diff if w[i] == total else total
            if new > cap:
                continue
            nxt = tuple(sorted(w[:i] + (new,) + w[i + 1:]))
            if nxt not in dist:
                dist[nxt] = dist[w] + 1
                queue.append(nxt)
    return None


def _descent(weights: list[int]) -> tuple[list[int], list[int]]:
    """Undo layerings greedily; returns (bottom weights, positions layered, bottom first)."""
    w = list(weights)
    undone = []
    while sorted(w) not in ([1, 2, 3], [1, 1, 2]):
        if sorted(w) == [0, 1, 1]:
            i = w.index(0)
        else:
            i = max(range(3), key=lambda x: w[x])
            j, k = (x for x in range(3) if x != i)
            if w[i] != w[j] + w[k]:
                raise FillError(f"weights {weights} are not those of a layered solid torus")
            w[i] = abs(w[j] - w[k])
            undone.append(i)
            continue
        j, k = (x for x in range(3) if x != i)
        w[i] = w[j] + w[k]
        undone.append(i)
    return w, undone[::-1]


def realize_theta(target: Sequence[Slope]) -> tuple[LayeredTrace, tuple[int, int, int]]:
    """A layered solid torus whose boundary edge weights match ``target``.

    Returns the solid torus and, for each target position, the boundary edge
    carrying it.  Slopes are matched up to a twist along the meridian, which
    the weights cannot see.
    """
    slopes = check_slope_triple(target)
    weights = [abs(a) for a, _ in slopes]
    bottom, ups = _descent(weights)
    lst = base_lst()
    if sorted(bottom) == [1, 1, 2]:
        lst = layer(lst, lst.weights.index(3))
    # assign positions to edges by weight; ties are interchangeable
    pos: list[int] = []
    free = list(range(3))
    for x in bottom:
        e = next(e for e in free if lst.weights[e] == x)
        free.remove(e)
        pos.append(e)
    for i in ups:
        lst, emap = _layer_tracked(lst, pos[i])
        pos = [emap[e] for e in pos]
    got = tuple(lst.weights[e] for e in pos)
    if got != tuple(weights):
        raise AssertionError(f"realized weights {got} differ from target {weights}")
    return lst, tuple(pos)


def _layer_tracked(lst: LayeredTrace, e: int) -> tuple[LayeredTrace, dict[int, int]]:
    """Layer on ``e`` and map old boundary edges to new ones (``e`` goes to the new edge)."""
    new = layer(lst, e)
    emap = {}
    for i in range(3):
        if i == e:
            continue
        tet, a, b = lst._class_rep(i)
        cls = new.complex.edge_of(tet, a, b)
        emap[i] = next(j for j in range(3) if new.complex.edge_of(*new._class_rep(j)) == cls)
    (emap[e],) = set(range(3)) - set(emap.values())
    return new, emap


def unimodular_triples(bound: int):
    """Slope triples {a, b, a + b} with entries bounded by ``bound``, up to sign."""
    prim = [(x, y) for x in range(0, bound + 1) for y in range(-bound, bound + 1)
            if gcd(x, y) == 1 and (x > 0 or y > 0)]
    seen = set()
    for a, b in itertools.combinations(prim, 2):
        if abs(det(a, b)) != 1:
            continue
        for c in ((a[0] + b[0], a[1] + b[1]), (a[0] - b[0], a[1] - b[1])):
            if max(abs(c[0]), abs(c[1])) > bound:
                continue
            if c[0] < 0 or (c[0] == 0 and c[1] < 0):
                c = (-c[0], -c[1])
            key = frozenset((a, b, c))
            if key not in seen:
                seen.add(key)
                yield tuple(sorted(key))


# -- filling a torus triangulation --------------------------------------------------------


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def meridian_frame(mu: Slope, coords: Sequence[Slope]) -> list[Slope]:
    """Rewrite ``coords`` in a unimodular basis (lambda, mu), so mu becomes (0, 1)."""
    g, a, b = _egcd(mu[1], -mu[0])
    if g != 1:
        raise FillError(f"meridian {mu} is not primitive")
    lam = (a, b)  # det(lam, mu) = 1
    return [(det(c, mu), det(lam, c)) for c in coords]


def _mirror(surf: SurfaceTriangulation) -> SurfaceTriangulation:
    sigma = (2, 1, 0)
    pairing = []
    for d in range(len(surf.pairing)):
        t, i = divmod(d, 3)
        u, r = divmod(surf.pairing[3 * t + sigma[i]], 3)
        pairing.append(3 * u + sigma[r])
    return SurfaceTriangulation(surf.triangle_count, tuple(pairing))


def _dart_isos(x: SurfaceTriangulation, y: SurfaceTriangulation):
    """Orientation-preserving isomorphisms as dart maps from ``x`` to ``y``."""
    if len(x.pairing) != len(y.pairing):
        return
    for start in range(len(y.pairing)):
        m = {0: start}
        stack = [0]
        ok = True
        while stack and ok:
            d = stack.pop()
            for a, b in ((d - d % 3 + (d + 1) % 3, m[d] - m[d] % 3 + (m[d] + 1) % 3),
                         (x.pairing[d], y.pairing[m[d]])):
                if a in m:
                    if m[a] != b:
                        ok = False
                        break
                else:
                    m[a] = b
                    stack.append(a)
        if ok and len(m) == len(x.pairing) and len(set(m.values())) == len(m):
            yield m


def _parity(vs: Sequence[int]) -> int:
    return sum(1 for i in range(3) for j in range(i + 1, 3) if vs[i] > vs[j]) % 2


@dataclass
class _Build:
    """Mutable state of the fill while the simplifying moves are replayed."""

    delta: SurfaceTriangulation
    surf: SurfaceTriangulation
    refs: list  # per current triangle: (cell key, cell vertex at each corner)
    dc: DeltaComplex
    tets: int = 0
    gluings: list = field(default_factory=list)
    outer: dict = field(default_factory=dict)
    folds: list = field(default_factory=list)
    kinds: list = field(default_factory=list)

    def new_tet(self, kind: str) -> int:
        k = self.tets
        self.tets += 1
        self.kinds.append(kind)
        self.dc.add(("t", k), 4)
        return k

    def attach(self, k: int, vmap: Sequence[int], ref, gluings=None, outer=None, folds=None):
        """Glue the face of tet ``k`` with vertex ``vmap[i]`` at corner i onto ``ref``."""
        gluings = self.gluings if gluings is None else gluings
        outer = self.outer if outer is None else outer
        folds = self.folds if folds is None else folds
        key, verts = ref
        if key[0] == "d":
            at = [0, 0, 0]
            for i in range(3):
                at[verts[i]] = vmap[i]
            outer[key[1]] = (k, tuple(at))
        elif key[0] == "t":
            (f,) = set(range(4)) - set(vmap)
            gluings.append((k, f, key[1], complete_perm(dict(zip(vmap, verts)))))
        else:
            side = _parity(verts)
            folds[key[1]][side] = (k, dict(zip(verts, vmap)))


def _observe(b: _Build):
    """The current inner surface must be a quotient of the partial complex."""
    s = b.surf
    for d in range(len(s.pairing)):
        q = s.pairing[d]
        if d > q:
            continue
        t, i = divmod(d, 3)
        u, r = divmod(q, 3)
        kt, vt = b.refs[t]
        ku, vu = b.refs[u]
        if b.dc.edge(kt, vt[i], vt[(i + 1) % 3]) != b.dc.edge(ku, vu[(r + 1) % 3], vu[r]):
            raise AssertionError(f"inner surface edge at dart {d} is not an edge of the complex")
    for orb in s.vertex_orbits:
        cls = {b.dc.vertex(b.refs[c // 3][0], b.refs[c // 3][1][c % 3]) for c in orb}
        if len(cls) != 1:
            raise AssertionError("inner surface vertex splits in the complex")


def _step_s2(b: _Build, e: int):
    s = b.surf
    d, q = s.edge_darts(e)
    t, i = divmod(d, 3)
    u, r = divmod(q, 3)
    new, _ = s2_darts(s, e)
    k = b.new_tet("layer")
    vt, vu = [0] * 3, [0] * 3
    vt[i], vt[(i + 1) % 3], vt[(i + 2) % 3] = 0, 1, 2
    vu[(r + 1) % 3], vu[r], vu[(r + 2) % 3] = 0, 1, 3
    b.dc.glue(("t", k), vt, *b.refs[t])
    b.dc.glue(("t", k), vu, *b.refs[u])
    b.attach(k, vt, b.refs[t])
    b.attach(k, vu, b.refs[u])
    b.refs[t] = (("t", k), (2, 0, 3))
    b.refs[u] = (("t", k), (3, 1, 2))
    b.surf = new


def _step_s3(b: _Build, v: int):
    s = b.surf
    orb = s.vertex_orbits[v]
    new, _ = s3_darts(s, v)
    k = b.new_tet("cap3")
    tris = [c // 3 for c in orb]
    # corner of v goes to 0; P_k to k + 1 with t_k = (v, P_k, P_{k-1})
    for n, c in enumerate(orb):
        vm = [0] * 3
        i = c % 3
        vm[i], vm[(i + 1) % 3], vm[(i + 2) % 3] = 0, 1 + n, 1 + (n - 1) % 3
        b.dc.glue(("t", k), vm, *b.refs[tris[n]])
        b.attach(k, vm, b.refs[tris[n]])
    gone = set(tris[1:])
    refs = [b.refs[t] for t in range(s.triangle_count) if t not in gone]
    slot = [t for t in range(s.triangle_count) if t not in gone].index(tris[0])
    refs[slot] = (("t", k), (1, 3, 2))
    b.refs = refs
    b.surf = new


def _step_s1(b: _Build, v: int, e1: int, e2: int):
    s = b.surf
    new, _ = s1_darts(s, v, e1, e2)
    orb = s.vertex_orbits[v]
    out_a = next(c for c in orb if s.edge_of[c] == e1)
    out_b = next(c for c in orb if s.edge_of[c] == e2)
    fid = len(b.folds)
    b.folds.append({})
    key = ("f", fid)
    b.dc.add(key, 3)
    for fold_edge, dart in (((0, 1), out_a), ((0, 2), out_b)):
        kk, vs = b.refs[dart // 3]
        j = dart % 3
        b.dc.glue(key, fold_edge, kk, (vs[j], vs[(j + 1) % 3]))
    b.refs = b.refs + [(key, (0, 1, 2)), (key, (0, 2, 1))]
    b.surf = new


@dataclass(frozen=True)
class FillTrace:
    """Result of filling a torus triangulation by a solid torus.

    ``moves`` is the replayed surface trace (with s1' expanded into s1, s2),
    ``kinds[k]`` says where tetrahedron k came from (layer, cap3 or cap), and
    ``boundary[j]`` is the tetrahedron and its vertex at each corner of input
    triangle j.
    """

    delta: SurfaceTriangulation
    meridian: tuple[int, ...]
    moves: MoveTrace
    cap: LayeredTrace
    complex: IdealTriangulation
    kinds: tuple[str, ...]
    boundary: tuple[tuple[int, tuple[int, int, int]], ...]
    folds: int

    @property
    def tet_count(self) -> int:
        return self.complex.tet_count

    def count(self, kind: str) -> int:
        return self.kinds.count(kind)

    def to_text(self) -> str:
        lines = [f"meridian {' '.join(map(str, self.meridian))}"]
        lines += [f"move {m}" for m in self.moves]
        lines.append("cap " + " ".join(map(str, self.cap.layerings)))
        lines.append("kinds " + " ".join(self.kinds))
        for j, (k, vs) in enumerate(self.boundary):
            lines.append(f"boundary {j} {k} {''.join(map(str, vs))}")
        return "\n".join(lines) + "\n" + self.complex.to_text()


def check_meridian(delta: SurfaceTriangulation, meridian: Sequence[int]) -> tuple[int, ...]:
    """A meridian is a cycle on the edges of ``delta`` that is not null-homologous."""
    mu = tuple(int(x) for x in meridian)
    if len(mu) != delta.edge_count:
        raise FillError(f"meridian has {len(mu)} coefficients for {delta.edge_count} edges")
    bal = [0] * delta.vertex_count
    for e, c in enumerate(mu):
        a, z = delta.edge_ends(e)
        bal[a] -= c
        bal[z] += c
    if any(bal):
        raise FillError("meridian is not a cycle")
    dc = _delta_complex(delta)
    if dc.solve_with([], dc.edge_vector(_delta_chain(delta, mu))) is not None:
        raise FillError("meridian is null-homologous on the torus")
    return mu


def _delta_complex(delta: SurfaceTriangulation) -> DeltaComplex:
    dc = DeltaComplex()
    for j in range(delta.triangle_count):
        dc.add(("d", j), 3)
    for d, q in enumerate(delta.pairing):
        if d < q:
            t, s = divmod(d, 3)
            u, r = divmod(q, 3)
            dc.glue(("d", t), (s, (s + 1) % 3), ("d", u), ((r + 1) % 3, r))
    return dc


def _delta_chain(delta: SurfaceTriangulation, mu: Sequence[int], refs=None):
    chain = []
    for e, c in enumerate(mu):
        if c:
            d, _ = delta.edge_darts(e)
            t, s = divmod(d, 3)
            key, vs = refs[t] if refs is not None else (("d", t), (0, 1, 2))
            chain.append((key, vs[s], vs[(s + 1) % 3], c))
    return chain


def fill_solid_torus(delta: SurfaceTriangulation, meridian: Sequence[int],
                     trace: MoveTrace | None = None) -> FillTrace:
    """Ideal triangulation of the solid torus with boundary ``delta`` killing ``meridian``.

    ``meridian`` gives one integer per edge of ``delta`` (edges oriented along
    their lower dart); it is used as a slope, so multiples are allowed.  ``trace`` defaults to the simplification of ``delta``.
    """
    if not delta.is_torus():
        raise FillError("boundary must be a connected torus")
    mu = check_meridian(delta, meridian)
    if trace is None:
        trace = simplify_torus(delta)
    dc = _delta_complex(delta)
    b = _Build(delta, delta, [(("d", j), (0, 1, 2)) for j in range(delta.triangle_count)], dc)
    done = []
    for mv in trace:
        if mv.kind == "s1p":
            parts = s1prime_moves(b.surf, *mv.params)
        else:
            parts = (mv,)
        for p in parts:
            {"s1": _step_s1, "s2": _step_s2, "s3": _step_s3}[p.kind](b, *p.params)
            done.append(p)
            _observe(b)
    if b.surf.triangle_count != 2 or b.surf.vertex_count != 1:
        raise FillError("trace does not end at the two-triangle torus")
    coords = torus_coordinates(b.surf)
    cols = [dc.edge_vector(edge_chain(b.surf, b.refs, e)) for e in range(3)]
    alpha = dc.solve_with(cols, dc.edge_vector(_delta_chain(delta, mu)))
    if alpha is None:
        raise AssertionError("meridian does not transfer to the inner torus")
    m = (sum(a * c[0] for a, c in zip(alpha, coords)), sum(a * c[1] for a, c in zip(alpha, coords)))
    if not any(m):
        raise AssertionError("meridian transfers to zero on the inner torus")
    # only the slope matters: a multiple of the meridian dies exactly when it does
    m = primitive(m)
    cap, _ = realize_theta(meridian_frame(m, coords))
    moves = MoveTrace.from_moves(done)
    for cand in _cap_candidates(b, cap, m, coords):
        kinds = tuple(b.kinds) + ("cap",) * cap.complex.tet_count
        ft = FillTrace(delta, mu, moves, cap, cand[0], kinds, cand[1], len(b.folds))
        if verify_fill(ft):
            return ft
    raise AssertionError("no gluing of the layered solid torus gives a valid filling")


def _cap_candidates(b: _Build, cap: LayeredTrace, m: Slope, coords: Sequence[Slope]):
    want = [abs(det(m, c)) for c in coords]
    bs = cap.boundary
    off = b.tets
    inner = b.surf
    for mirrored in (False, True):
        src = _mirror(bs.surface) if mirrored else bs.surface
        corner = (0, 2, 1) if mirrored else (0, 1, 2)
        for dm in _dart_isos(src, inner):
            if any(cap.weights[src.edge_of[d] if not mirrored else bs.surface.edge_of[_unmirror_dart(d)]]
                   != want[inner.edge_of[dm[d]]] for d in range(6)):
                continue
            gluings = list(b.gluings)
            outer = dict(b.outer)
            folds = [dict(x) for x in b.folds]
            for t, f, t2, p in cap.complex.gluing_list():
                gluings.append((t + off, f, t2 + off, p))
            for x in range(2):
                tet, _, cs = bs.faces[x]
                y = dm[3 * x] // 3
                vm = [0] * 3
                for i in range(3):
                    vm[dm[3 * x + i] % 3] = cs[corner[i]]
                b.attach(off + tet, vm, b.refs[y], gluings, outer, folds)
            try:
                for side in folds:
                    (ka, ma), (kb, mb) = side[0], side[1]
                    (f,) = set(range(4)) - set(ma.values())
                    gluings.append((ka, f, kb, complete_perm({ma[v]: mb[v] for v in ma})))
                tri = IdealTriangulation.from_gluings(off + cap.complex.tet_count, gluings)
            except (TriangulationError, KeyError):
                continue
            yield tri, tuple(outer[j] for j in range(b.delta.triangle_count))


def _unmirror_dart(d: int) -> int:
    return d - d % 3 + (2, 1, 0)[d % 3]


def fill_problems(ft: FillTrace) -> list[str]:
    """Everything that keeps ``ft`` from being a solid torus filling of its boundary."""
    tri, delta = ft.complex, ft.delta
    out = []
    if not tri.is_orientable():
        return ["complex is not orientable"]
    if any(ec.reversed_self_identification for ec in tri.edge_classes):
        out.append("an edge is identified with itself in reverse")
    for link in tri.vertex_links:
        if link.closed or not link.connected or link.euler != 1:
            out.append(f"vertex {link.vertex}: link is not a disc")
    if tri.vertex_count != delta.vertex_count:
        out.append(f"{tri.vertex_count} vertices, boundary has {delta.vertex_count}")
    if out:
        return out
    # boundary equals delta, dart for dart, up to a global orientation flip
    bs = boundary_surface(tri)
    where = {(t, f): i for i, (t, f, _) in enumerate(bs.faces)}
    dmap = {}
    flips = set()
    for j, (k, vs) in enumerate(ft.boundary):
        (f,) = set(range(4)) - set(vs)
        i = where.get((k, f))
        if i is None:
            return [f"input triangle {j} is not a boundary face"]
        cs = bs.faces[i][2]
        pos = [cs.index(v) for v in vs]
        flip = (pos[1] - pos[0]) % 3 != 1
        flips.add(flip)
        for s in range(3):
            a, z = pos[s], pos[(s + 1) % 3]
            dmap[3 * j + s] = 3 * i + (z if flip else a)
    if len(flips) != 1 or len(set(dmap.values())) != len(dmap) or len(dmap) != len(bs.surface.pairing):
        return ["boundary triangles do not match the input torus"]
    if any(dmap[delta.pairing[d]] != bs.surface.pairing[dmap[d]] for d in dmap):
        return ["boundary gluing differs from the input torus"]
    # exactly one boundary class dies, and it is the meridian
    dc = complex_of(tri)
    refs = [(("t", k), vs) for k, vs in ft.boundary]
    if dc.solve_with([], dc.edge_vector(_delta_chain(delta, ft.meridian, refs))) is None:
        out.append("meridian survives in the filling")
    cols = []
    for e in range(delta.edge_count):
        one = [0] * delta.edge_count
        one[e] = 1
        cols.append(dc.edge_vector(_delta_chain(delta, one, refs)))
    if len(dc.nullspace_with(cols)) != delta.triangle_count:
        out.append("kernel of boundary homology is not one-dimensional")
    return out


def verify_fill(ft: FillTrace) -> bool:
    return not fill_problems(ft)


def fundamental_meridian(delta: SurfaceTriangulation, seed_edge: int = 0) -> tuple[int, ...]:
    """Some non-separating cycle on ``delta``: a spanning-tree closure that is not a boundary."""
    from .graph_core import Multigraph, fundamental_cycle, spanning_forest
    pairs = [delta.edge_ends(e) for e in range(delta.edge_count)]
    g = Multigraph.from_pairs(delta.vertex_count, pairs)
    tree = set(spanning_forest(g))
    chords = [e for e in range(delta.edge_count) if e not in tree]
    chords = chords[seed_edge % len(chords):] + chords[:seed_edge % len(chords)]
    for c in chords:
        cyc = fundamental_cycle(g, tree, c)
        mu = _orient_cycle(delta, cyc)
        try:
            return check_meridian(delta, mu)
        except FillError:
            continue
    raise FillError("torus has no non-separating fundamental cycle")


def _orient_cycle(delta: SurfaceTriangulation, cyc: Sequence[int]) -> list[int]:
    mu = [0] * delta.edge_count
    first = cyc[0]
    a, z = delta.edge_ends(first)
    mu[first] = 1
    here = z
    rest = list(cyc[1:])
    while rest:
        for e in rest:
            x, y = delta.edge_ends(e)
            if x == here:
                mu[e] += 1
                here = y
            elif y == here:
                mu[e] -= 1
                here = x
            else:
                continue
            rest.remove(e)
            break
        else:
            raise FillError("cycle edges do not chain")
    return mu
