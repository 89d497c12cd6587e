"""Tetrahedral complexes given by face pairings.

A gluing of face ``f`` of tetrahedron ``t`` is a pair ``(t2, perm)`` where
``perm`` is a 4-tuple sending vertices of ``t`` to vertices of ``t2``; face
``f`` lands on face ``perm[f]``.  Unglued faces (``None``) are allowed so the
same class carries solid tori and other complexes with boundary; an ideal
triangulation proper has every face glued.

Text format::

    tets N
    glue t1.f1 t2.f2 perm=abc

where ``abc`` lists, for the three corners of face ``f1`` taken in increasing
order, their images among the corners of ``t2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from .graph_core import Multigraph
from .surface_tri import SurfaceTriangulation

Perm = tuple[int, int, int, int]
Gluing = Optional[tuple[int, Perm]]
TET_EDGES = tuple(combinations(range(4), 2))


class TriangulationError(ValueError):
    pass


def perm_sign(p: Iterable[int]) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def perm_inverse(p: Perm) -> Perm:
    out = [0] * 4
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[q[i]] for i in range(4))


def face_corners(f: int) -> tuple[int, int, int]:
    return tuple(x for x in range(4) if x != f)


def complete_perm(pairs: dict[int, int]) -> Perm:
    """Extend a bijection on three tetrahedron vertices to all four."""
    out = dict(pairs)
    (rest_src,) = set(range(4)) - set(out)
    (rest_dst,) = set(range(4)) - set(out.values())
    out[rest_src] = rest_dst
    return tuple(out[i] for i in range(4))


class _ParityDSU:
    """Union-find tracking a relative sign between each element and its root."""

    def __init__(self):
        self.parent: dict = {}
        self.sign: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x], self.sign[x] = x, 1
            return x, 1
        s = 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            s *= self.sign[x]
            x = self.parent[x]
        root = x
        # path compression with sign bookkeeping
        acc = s
        for y in path:
            ys = self.sign[y]
            self.parent[y], self.sign[y] = root, acc
            acc *= ys
        return root, s

    def union(self, a, b, rel: int) -> bool:
        """Declare sign(a) = rel * sign(b); return False on a contradiction."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        if ra == rb:
            return sa == rel * sb
        self.parent[ra] = rb
        self.sign[ra] = sa * rel * sb
        return True


@dataclass(frozen=True)
class EdgeClass:
    members: tuple[tuple[int, tuple[int, int]], ...]
    # cyclic (or linear, for boundary edges) sequence of (tet, (a, b)) around the edge
    walk: tuple[tuple[int, tuple[int, int]], ...]
    reversed_self_identification: bool
    on_boundary: bool

    @property
    def degree(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class VertexLink:
    vertex: int
    triangles: int
    euler: int
    closed: bool
    connected: bool

    @property
    def genus(self) -> int:
        return (2 - self.euler) // 2


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    boundary: tuple[tuple[int, int], ...]
    tet_count: int
    edge_class_count: int

    @property
    def valid(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        genera = ",".join(str(g) for _, g in self.boundary) or "-"
        return (f"{self.tet_count} tets, {self.edge_class_count} edge classes, "
                f"boundary genus {genera}")


@dataclass(frozen=True)
class IdealTriangulation:
    tet_count: int
    gluing: tuple[tuple[Gluing, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(None if x is None else (int(x[0]), tuple(x[1])) for x in row)
                  for row in self.gluing)
        object.__setattr__(self, "gluing", g)
        if len(g) != self.tet_count or any(len(row) != 4 for row in g):
            raise TriangulationError("need four face slots per tetrahedron")
        for t, row in enumerate(g):
            for f, x in enumerate(row):
                if x is None:
                    continue
                t2, p = x
                if not 0 <= t2 < self.tet_count or sorted(p) != [0, 1, 2, 3]:
                    raise TriangulationError(f"bad gluing at {t}.{f}")
                back = g[t2][p[f]]
                if back is None or back[0] != t or back[1] != perm_inverse(p):
                    raise TriangulationError(f"gluing at {t}.{f} is not symmetric")
                if t2 == t and p[f] == f:
                    raise TriangulationError(f"face {t}.{f} glued to itself")

    # -- construction -------------------------------------------------------------

    @classmethod
    def from_gluings(cls, n: int, gluings: Iterable[tuple[int, int, int, Perm]]) -> "IdealTriangulation":
        rows: list[list[Gluing]] = [[None] * 4 for _ in range(n)]
        for t, f, t2, p in gluings:
            p = tuple(p)
            f2 = p[f]
            if rows[t][f] is not None or rows[t2][f2] is not None:
                raise TriangulationError(f"face glued twice: {t}.{f} or {t2}.{f2}")
            rows[t][f] = (t2, p)
            rows[t2][f2] = (t, perm_inverse(p))
        return cls(n, tuple(tuple(r) for r in rows))

    def gluing_list(self) -> list[tuple[int, int, int, Perm]]:
        out = []
        for t, f in self.face_sides():
            x = self.gluing[t][f]
            if x is not None and (t, f) < (x[0], x[1][f]):
                out.append((t, f, x[0], x[1]))
        return out

    def face_sides(self):
        return [(t, f) for t in range(self.tet_count) for f in range(4)]

    def is_closed(self) -> bool:
        return all(x is not None for row in self.gluing for x in row)

    def unglued_faces(self) -> list[tuple[int, int]]:
        return [(t, f) for t, f in self.face_sides() if self.gluing[t][f] is None]

    # -- text format ----------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"tets {self.tet_count}"]
        for t, f, t2, p in self.gluing_list():
            img = "".join(str(p[c]) for c in face_corners(f))
            lines.append(f"glue {t}.{f} {t2}.{p[f]} perm={img}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "IdealTriangulation":
        n = None
        gl = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            try:
                if tok[0] == "tets" and len(tok) == 2:
                    n = int(tok[1])
                elif tok[0] == "glue" and len(tok) == 4 and tok[3].startswith("perm="):
                    t, f = map(int, tok[1].split("."))
                    t2, f2 = map(int, tok[2].split("."))
                    img = [int(c) for c in tok[3][5:]]
                    if len(img) != 3:
                        raise ValueError
                    p = complete_perm(dict(zip(face_corners(f), img)))
                    if p[f] != f2:
                        raise ValueError
                    gl.append((t, f, t2, p))
                else:
                    raise ValueError
            except (ValueError, IndexError):
                raise TriangulationError(f"cannot parse triangulation line {raw!r}") from None
        if n is None:
            raise TriangulationError("missing 'tets N' header")
        return cls.from_gluings(n, gl)

    # -- orientation -------------------------------------------------------------------

    @cached_property
    def orientation(self) -> tuple[int, ...] | None:
        """Per-tetrahedron sign making every gluing orientation-reversing, or None."""
        o: list[int | None] = [None] * self.tet_count
        for start in range(self.tet_count):
            if o[start] is not None:
                continue
            o[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for f in range(4):
                    x = self.gluing[t][f]
                    if x is None:
                        continue
                    t2, p = x
                    want = -perm_sign(p) * o[t]
                    if o[t2] is None:
                        o[t2] = want
                        stack.append(t2)
                    elif o[t2] != want:
                        return None
        return tuple(o)

    def is_orientable(self) -> bool:
        return self.orientation is not None

    # -- faces ---------------------------------------------------------------------------

    @cached_property
    def face_classes(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        """Glued face pairs ``((t, f), (t2, f2))`` with the first side the smaller."""
        return tuple(((t, f), (t2, p[f])) for t, f, t2, p in self.gluing_list())

    @cached_property
    def face_class_of(self) -> dict[tuple[int, int], int]:
        out = {}
        for i, (a, b) in enumerate(self.face_classes):
            out[a] = out[b] = i
        return out

    # -- edges ---------------------------------------------------------------------------

    def _edge_walk(self, t: int, a: int, b: int, c: int, d: int):
        """Walk around edge ``ab`` of ``t`` leaving through face ``d`` first."""
        start = (t, a, b, c, d)
        seq = []
        for _ in range(6 * self.tet_count + 1):
            seq.append((t, (min(a, b), max(a, b))))
            x = self.gluing[t][d]
            if x is None:
                break
            t2, p = x
            t, a, b, c, d = t2, p[a], p[b], p[d], p[c]
            if (t, a, b, c, d) == start:
                break
        return tuple(seq)

    @cached_property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        dsu = _ParityDSU()
        reversed_classes = set()
        for t in range(self.tet_count):
            for e in TET_EDGES:
                dsu.find((t, e))
        for t, f, t2, p in self.gluing_list():
            for a, b in combinations(face_corners(f), 2):
                pa, pb = p[a], p[b]
                rel = 1 if pa < pb else -1
                if not dsu.union((t, (a, b)), (t2, (min(pa, pb), max(pa, pb))), rel):
                    reversed_classes.add((t, (a, b)))
        groups: dict = {}
        for t in range(self.tet_count):
            for e in TET_EDGES:
                groups.setdefault(dsu.find((t, e))[0], []).append((t, e))
        bad_roots = {dsu.find(x)[0] for x in reversed_classes}
        out = []
        for root, members in groups.items():
            walk = self._class_walk(members)
            on_boundary = any(self.gluing[t][f] is None for t, (a, b) in members
                              for f in range(4) if f not in (a, b))
            out.append(EdgeClass(tuple(members), walk, root in bad_roots, on_boundary))
        out.sort(key=lambda ec: ec.members[0])
        return tuple(out)

    def _class_walk(self, members):
        # boundary edges start at an unglued side so the walk is linear
        for t, (a, b) in members:
            c, d = (x for x in range(4) if x not in (a, b))
            if self.gluing[t][c] is None:
                return self._edge_walk(t, a, b, c, d)
            if self.gluing[t][d] is None:
                return self._edge_walk(t, a, b, d, c)
        t, (a, b) = members[0]
        c, d = (x for x in range(4) if x not in (a, b))
        return self._edge_walk(t, a, b, c, d)

    @cached_property
    def edge_class_of(self) -> dict[tuple[int, tuple[int, int]], int]:
        out = {}
        for i, ec in enumerate(self.edge_classes):
            for m in ec.members:
                out[m] = i
        return out

    def edge_of(self, t: int, a: int, b: int) -> int:
        return self.edge_class_of[(t, (min(a, b), max(a, b)))]

    # -- vertices and links ----------------------------------------------------------

    @cached_property
    def vertex_class_of(self) -> dict[tuple[int, int], int]:
        dsu = _ParityDSU()
        for t in range(self.tet_count):
            for v in range(4):
                dsu.find((t, v))
        for t, f, t2, p in self.gluing_list():
            for v in face_corners(f):
                dsu.union((t, v), (t2, p[v]), 1)
        roots: dict = {}
        out = {}
        for t in range(self.tet_count):
            for v in range(4):
                r = dsu.find((t, v))[0]
                roots.setdefault(r, len(roots))
                out[(t, v)] = roots[r]
        return out

    @property
    def vertex_count(self) -> int:
        return len(set(self.vertex_class_of.values()))

    @cached_property
    def vertex_links(self) -> tuple[VertexLink, ...]:
        """Links of vertex classes: triangles (t, v), arcs from gluings, vertices = edge ends."""
        nv = self.vertex_count
        tris = [0] * nv
        arcs = [0] * nv
        unglued_sides = [0] * nv
        for (t, v), k in self.vertex_class_of.items():
            tris[k] += 1
            for f in range(4):
                if f != v and self.gluing[t][f] is None:
                    unglued_sides[k] += 1
        for t, f, t2, p in self.gluing_list():
            for v in face_corners(f):
                arcs[self.vertex_class_of[(t, v)]] += 1
        arcs = [a + u for a, u in zip(arcs, unglued_sides)]
        ends = [set() for _ in range(nv)]
        for t in range(self.tet_count):
            for e in TET_EDGES:
                for x in e:
                    ends[self.vertex_class_of[(t, x)]].add(self._end_sides.find((t, e, x))[0])
        # connectivity of each link: triangles joined across glued faces
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, f, t2, p in self.gluing_list():
            for v in face_corners(f):
                parent[find((t, v))] = find((t2, p[v]))
        comps = [set() for _ in range(nv)]
        for (t, v), k in self.vertex_class_of.items():
            comps[k].add(find((t, v)))
        out = []
        for k in range(nv):
            chi = len(ends[k]) - arcs[k] + tris[k]
            out.append(VertexLink(k, tris[k], chi, unglued_sides[k] == 0, len(comps[k]) == 1))
        return tuple(out)

    @cached_property
    def _end_sides(self):
        dsu = _ParityDSU()
        for t in range(self.tet_count):
            for e in TET_EDGES:
                for x in e:
                    dsu.find((t, e, x))
        for t, f, t2, p in self.gluing_list():
            for a, b in combinations(face_corners(f), 2):
                e2 = (min(p[a], p[b]), max(p[a], p[b]))
                dsu.union((t, (a, b), a), (t2, e2, p[a]), 1)
                dsu.union((t, (a, b), b), (t2, e2, p[b]), 1)
        return dsu

    # -- validation -------------------------------------------------------------------

    def validate(self) -> ValidationReport:
        v = []
        for t, f in self.unglued_faces():
            v.append(f"face {t}.{f} is unglued")
        if not self.is_orientable():
            v.append("face pairings are not orientation-compatible")
        for i, ec in enumerate(self.edge_classes):
            if ec.reversed_self_identification:
                v.append(f"edge class {i} is identified with itself in reverse")
        boundary = []
        for link in self.vertex_links:
            if not link.connected:
                v.append(f"vertex {link.vertex}: link is disconnected")
            elif link.closed and link.euler == 2:
                v.append(f"vertex {link.vertex}: spherical link")
            elif link.closed and link.euler % 2:
                v.append(f"vertex {link.vertex}: link has odd Euler characteristic")
            if link.closed:
                boundary.append((link.vertex, link.genus))
        return ValidationReport(tuple(v), tuple(boundary), self.tet_count, len(self.edge_classes))

    def is_valid(self) -> bool:
        return self.validate().valid

    def boundary_genera(self) -> list[tuple[int, int]]:
        rep = self.validate()
        if not rep.valid:
            raise TriangulationError("; ".join(rep.violations))
        return list(rep.boundary)

    # -- dual spine graph --------------------------------------------------------------

    def dual_graph(self) -> Multigraph:
        """Vertices = tetrahedra, edges = face classes, slots = face indices."""
        edges = tuple(((a[0], a[1]), (b[0], b[1])) for a, b in self.face_classes)
        return Multigraph(self.tet_count, edges)

    def face_edge_incidences(self, face: int) -> tuple[int, int, int]:
        """Edge classes on the three sides of a face class (with multiplicity)."""
        (t, f), _ = self.face_classes[face]
        return tuple(self.edge_of(t, a, b) for a, b in combinations(face_corners(f), 2))

    # -- homology -------------------------------------------------------------------------

    def homology_h1(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion coefficients) of H1 via the dual spine."""
        from .homology import spine_h1
        return spine_h1(self)


# -- 2-3 move ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PachnerResult:
    triangulation: IdealTriangulation
    # old tet -> None (both destroyed); old face class -> new face class (surviving ones)
    face_map: dict[int, int]
    edge_map: dict[int, int]
    new_edge: int
    new_faces: tuple[int, int, int]


def pachner23(tri: IdealTriangulation, face: int) -> PachnerResult:
    (t1, f1), (t2, f2) = tri.face_classes[face]
    if t1 == t2:
        raise TriangulationError("2-3 move needs a face between two distinct tetrahedra")
    _, pi = tri.gluing[t1][f1]
    p, q = f1, f2  # apexes: p in t1, q in t2
    c = face_corners(f1)
    keep = [t for t in range(tri.tet_count) if t not in (t1, t2)]
    slot = {t: i for i, t in enumerate(keep)}
    base = len(keep)
    new_index = [base, base + 1, base + 2]
    # T_k has vertices 0 = p (apex of t1), 1 = q (apex of t2), 2 = c_{k+1}, 3 = c_{k+2}
    verts = [(c[(k + 1) % 3], c[(k + 2) % 3]) for k in range(3)]
    rows: list[list[Gluing]] = [[None] * 4 for _ in range(base + 3)]

    def t1_to_new(k):
        """Vertex map of T_k's face opposite 1 (p, c_{k+1}, c_{k+2}) into t1."""
        return {0: p, 2: verts[k][0], 3: verts[k][1]}

    def t2_to_new(k):
        return {1: q, 2: pi[verts[k][0]], 3: pi[verts[k][1]]}

    ext: list[tuple[tuple[int, int], tuple[int, dict[int, int]]]] = []
    # outside gluings of the old tets, expressed per new face
    for k in range(3):
        ck = c[k]
        ext.append(((new_index[k], 1), (t1, ck, t1_to_new(k))))
        ext.append(((new_index[k], 0), (t2, pi[ck], t2_to_new(k))))

    def where(t, f):
        """New (tet, face, map old-vertex -> new-vertex) of old face (t, f)."""
        for (nt, nf), (ot, of, m) in ext:
            if ot == t and of == f:
                return nt, nf, {v: k for k, v in m.items()}
        return slot[t], f, {v: v for v in range(4)}

    gl = []
    for t, f, t2_, pp in tri.gluing_list():
        if {(t, f), (t2_, pp[f])} == {(t1, f1), (t2, f2)}:
            continue
        a_t, a_f, a_m = where(t, f)
        b_t, b_f, b_m = where(t2_, pp[f])
        pairs = {a_m[v]: b_m[pp[v]] for v in face_corners(f)}
        gl.append((a_t, a_f, b_t, complete_perm(pairs)))
    # internal faces: T_k face opposite 3 meets T_{k-1} face opposite 2
    for k in range(3):
        gl.append((new_index[k], 3, new_index[(k - 1) % 3], (0, 1, 3, 2)))
    new = IdealTriangulation.from_gluings(base + 3, gl)
    # identification maps for surviving face and edge classes
    face_map = {}
    for i, (a, b) in enumerate(tri.face_classes):
        if i == face:
            continue
        nt, nf, _ = where(*a)
        face_map[i] = new.face_class_of[(nt, nf)]
    edge_map = {}
    for i, ec in enumerate(tri.edge_classes):
        for t, (a, b) in ec.members:
            if t in slot:
                edge_map[i] = new.edge_of(slot[t], a, b)
                break
        else:
            t, (a, b) = ec.members[0]
            for (nt, nf), (ot, of, m) in ext:
                inv = {v: k for k, v in m.items()}
                if ot == t and a in inv and b in inv:
                    edge_map[i] = new.edge_of(nt, inv[a], inv[b])
                    break
    new_edge = new.edge_of(new_index[0], 0, 1)
    new_faces = tuple(new.face_class_of[(new_index[k], 3)] for k in range(3))
    return PachnerResult(new, face_map, edge_map, new_edge, new_faces)


# -- boundary surfaces --------------------------------------------------------------------


@dataclass(frozen=True)
class BoundarySurface:
    surface: SurfaceTriangulation
    # surface triangle -> (tet, face, tet vertex at each surface corner)
    faces: tuple[tuple[int, int, tuple[int, int, int]], ...]


def boundary_surface(tri: IdealTriangulation) -> BoundarySurface:
    """Oriented triangulated boundary of a complex with unglued faces."""
    o = tri.orientation
    if o is None:
        raise TriangulationError("boundary orientation needs an orientable complex")
    faces = []
    index = {}
    for t, f in tri.unglued_faces():
        a, b, c = face_corners(f)
        # induced boundary orientation of face f in a tet of sign o[t]
        corners = (a, b, c) if (-1) ** f * o[t] > 0 else (a, c, b)
        index[(t, f)] = len(faces)
        faces.append((t, f, corners))
    pairing = [-1] * (3 * len(faces))
    for i, (t, f, cs) in enumerate(faces):
        for s in range(3):
            x, y = cs[s], cs[(s + 1) % 3]
            (w,) = set(face_corners(f)) - {x, y}
            # walk around edge xy inside the complex starting through face opposite w
            tt, xx, yy, ff, other = t, x, y, w, f
            for _ in range(6 * tri.tet_count + 6):
                g = tri.gluing[tt][ff]
                if g is None:
                    break
                t2, p = g
                # entered t2 through the image of ff; leave through the image of the face we were on
                tt, xx, yy, ff, other = t2, p[xx], p[yy], p[other], p[ff]
            else:
                raise TriangulationError("edge walk did not reach the boundary")
            j = index[(tt, ff)]
            cs2 = faces[j][2]
            s2 = next(r for r in range(3) if {cs2[r], cs2[(r + 1) % 3]} == {xx, yy})
            if (cs2[s2], cs2[(s2 + 1) % 3]) != (yy, xx):
                raise TriangulationError("boundary orientation mismatch")
            pairing[3 * i + s] = 3 * j + s2
    return BoundarySurface(SurfaceTriangulation(len(faces), tuple(pairing)), tuple(faces))
