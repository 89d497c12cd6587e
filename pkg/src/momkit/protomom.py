"""Handle structures induced by an ideal triangulation.

A structure keeps some edge classes (1-handles) and some face classes
(2-handles) of a triangulation.  What is left over splits into lateral
regions, one per component of the complement graph: tetrahedra joined across
unkept faces.  Each region is a ball per tetrahedron, a slab per unkept face
and a solid cylinder per unkept edge, so its boundary has Euler
characteristic ``2 (V - F + U)``.

Maximal structures (every lateral region a torus, every edge kept) are in
bijection with the face sets of general Mom-subgraphs of the dual graph, which
is how the M-moves are carried out.
"""
from __future__ import annotations

import logging
import os
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .ideal_tri import (IdealTriangulation, PachnerResult, TriangulationError,
                        boundary_surface, complete_perm, face_corners, pachner23)
from .mom_subgraph import (GENERAL, MomColoring, MoveError, apply_move, classify,
                           enumerate_moms, expand)
from .mom_subgraph import relate as relate_moms
from .trace import Move, MoveTrace

log = logging.getLogger(__name__)

SPHERE, TORUS, HIGHER, DEGENERATE = "sphere", "torus", "genus>=2", "degenerate"


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class Lateral:
    tets: tuple[int, ...]
    faces: tuple[int, ...]  # unkept faces inside the region
    edges: tuple[int, ...]  # unkept edges inside the region
    euler: int

    @property
    def kind(self) -> str:
        if self.euler == 2:
            return SPHERE
        if self.euler == 0:
            return TORUS
        if self.euler < 0 and self.euler % 2 == 0:
            return HIGHER
        return DEGENERATE

    @property
    def betti1(self) -> int:
        return len(self.faces) - len(self.tets) + 1


@dataclass(frozen=True)
class InducedProtoMom:
    tri: IdealTriangulation
    kept_edges: frozenset[int]
    kept_faces: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "kept_edges", frozenset(self.kept_edges))
        object.__setattr__(self, "kept_faces", frozenset(self.kept_faces))
        ne, nf = len(self.tri.edge_classes), len(self.tri.face_classes)
        if any(not 0 <= e < ne for e in self.kept_edges):
            raise StructureError("kept edge out of range")
        if any(not 0 <= f < nf for f in self.kept_faces):
            raise StructureError("kept face out of range")

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(self.kept_edges)), tuple(sorted(self.kept_faces))

    def with_sets(self, edges: Iterable[int], faces: Iterable[int]) -> "InducedProtoMom":
        return InducedProtoMom(self.tri, frozenset(edges), frozenset(faces))

    # -- handles ---------------------------------------------------------------------

    @cached_property
    def incidences(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(self.tri.face_edge_incidences(f) for f in range(len(self.tri.face_classes)))

    def closure_ok(self) -> bool:
        return all(e in self.kept_edges for f in self.kept_faces for e in self.incidences[f])

    @cached_property
    def valence(self) -> dict[int, int]:
        """Number of kept-face sides running along each kept edge."""
        out = {e: 0 for e in self.kept_edges}
        for f in self.kept_faces:
            for e in self.incidences[f]:
                if e in out:
                    out[e] += 1
        return out

    def is_genuine(self) -> bool:
        return all(v >= 2 for v in self.valence.values())

    # -- lateral regions -------------------------------------------------------------

    @cached_property
    def unkept_faces(self) -> tuple[int, ...]:
        return tuple(f for f in range(len(self.tri.face_classes)) if f not in self.kept_faces)

    @cached_property
    def laterals(self) -> tuple[Lateral, ...]:
        n = self.tri.tet_count
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        fc = self.tri.face_classes
        for f in self.unkept_faces:
            (t, _), (t2, _) = fc[f]
            parent[find(t)] = find(t2)
        groups: dict[int, list] = {}
        for t in range(n):
            groups.setdefault(find(t), [[], [], []])[0].append(t)
        for f in self.unkept_faces:
            groups[find(fc[f][0][0])][1].append(f)
        for e, ec in enumerate(self.tri.edge_classes):
            if e not in self.kept_edges:
                groups[find(ec.members[0][0])][2].append(e)
        out = []
        for tets, faces, edges in groups.values():
            out.append(Lateral(tuple(tets), tuple(faces), tuple(edges),
                               2 * (len(tets) - len(faces) + len(edges))))
        return tuple(sorted(out, key=lambda c: c.tets))

    def lateral_kinds(self) -> tuple[str, ...]:
        return tuple(c.kind for c in self.laterals)

    def census(self) -> dict[str, int]:
        out = {SPHERE: 0, TORUS: 0, HIGHER: 0, DEGENERATE: 0}
        for k in self.lateral_kinds():
            out[k] += 1
        return out

    def is_internal_valid(self) -> bool:
        return self.closure_ok() and all(k == TORUS for k in self.lateral_kinds())

    def is_tau_maximal(self) -> bool:
        # adding a face to a toral region leaves a tree somewhere, so only edges can be added
        return self.is_internal_valid() and len(self.kept_edges) == len(self.tri.edge_classes)

    # -- lakes ----------------------------------------------------------------------------

    @cached_property
    def lakes(self) -> tuple[tuple[tuple[tuple[int, int], ...], int], ...]:
        """(truncation triangles, Euler characteristic) of each lake."""
        tri = self.tri
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        arcs = []
        for f in self.unkept_faces:
            (t, ff), (t2, _) = tri.face_classes[f]
            p = tri.gluing[t][ff][1]
            for v in face_corners(ff):
                arcs.append(((t, v), (t2, p[v])))
                parent[find((t, v))] = find((t2, p[v]))
        tris = [(t, v) for t in range(tri.tet_count) for v in range(4)]
        chi: dict = {}
        for x in tris:
            chi[find(x)] = chi.get(find(x), 0) + 1
        for a, _ in arcs:
            chi[find(a)] -= 1
        ends = tri._end_sides
        seen = set()
        for t, v in tris:
            for y in range(4):
                if y == v:
                    continue
                e = (min(v, y), max(v, y))
                if tri.edge_of(t, *e) in self.kept_edges:
                    continue
                r = ends.find((t, e, v))[0]
                if r not in seen:
                    seen.add(r)
                    chi[find((t, v))] += 1
        members: dict = {}
        for x in tris:
            members.setdefault(find(x), []).append(x)
        return tuple((tuple(m), chi[r]) for r, m in sorted(members.items(), key=lambda kv: kv[1]))

    def is_full(self) -> bool:
        return all(c == 1 for _, c in self.lakes)

    # -- serialization ---------------------------------------------------------------------

    def to_text(self, tri_path: str | None = None) -> str:
        lines = []
        if tri_path is not None:
            lines.append(f"triangulation {tri_path}")
        lines.append("keep-edges " + " ".join(map(str, sorted(self.kept_edges))))
        lines.append("keep-faces " + " ".join(map(str, sorted(self.kept_faces))))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, tri: IdealTriangulation | None = None,
              base_dir: str | os.PathLike | None = None) -> "InducedProtoMom":
        edges, faces, path = set(), set(), None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            if head == "triangulation":
                path = rest[0]
            elif head == "keep-edges":
                edges = {int(x) for x in rest}
            elif head == "keep-faces":
                faces = {int(x) for x in rest}
            else:
                raise StructureError(f"unknown line {raw!r}")
        if tri is None:
            if path is None:
                raise StructureError("structure names no triangulation")
            p = Path(path) if base_dir is None else Path(base_dir) / path
            tri = IdealTriangulation.parse(p.read_text())
        return cls(tri, frozenset(edges), frozenset(faces))


# -- the footprint and greedy removal -----------------------------------------------------


def full_footprint(tri: IdealTriangulation) -> InducedProtoMom:
    """Every edge a 1-handle, every face a 2-handle: one sphere per tetrahedron."""
    return InducedProtoMom(tri, frozenset(range(len(tri.edge_classes))),
                           frozenset(range(len(tri.face_classes))))


@dataclass(frozen=True)
class Removal:
    structure: InducedProtoMom
    deletions: tuple[tuple[int, str], ...]  # (face class, rule a/b/c)


def _rule(s: InducedProtoMom, f: int) -> str | None:
    (t, _), (t2, _) = s.tri.face_classes[f]
    where = {}
    for c in s.laterals:
        for x in c.tets:
            where[x] = c
    a, b = where[t], where[t2]
    if a is b:
        return "c" if a.kind == SPHERE else None
    kinds = {a.kind, b.kind}
    if kinds == {SPHERE}:
        return "a"
    if kinds == {SPHERE, TORUS}:
        return "b"
    return None


def greedy_removal(raw: InducedProtoMom, strategy: str = "lowest",
                   rng: random.Random | None = None) -> Removal:
    """Delete 2-handles by rules (a), (b), (c) until no region is a sphere.

    ``strategy`` is "lowest" (lowest eligible face first) or "random" (uses
    ``rng``).
    """
    s = raw
    steps = []
    while SPHERE in s.lateral_kinds():
        eligible = [(f, r) for f in sorted(s.kept_faces) if (r := _rule(s, f))]
        if not eligible:
            raise StructureError("no removable 2-handle while a sphere remains")
        if strategy == "random":
            f, r = (rng or random.Random(0)).choice(eligible)
        elif strategy == "lowest":
            f, r = eligible[0]
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        steps.append((f, r))
        s = s.with_sets(s.kept_edges, s.kept_faces - {f})
        log.debug("removed face %d by rule %s", f, r)
    if len(steps) != raw.tri.tet_count:
        raise AssertionError(f"{len(steps)} deletions for {raw.tri.tet_count} tetrahedra")
    return Removal(s, tuple(steps))


# -- duality with Mom-subgraphs -------------------------------------------------------------


def to_mom_coloring(s: InducedProtoMom) -> MomColoring:
    """Kept faces become f; in each region the lowest cycle face is c, the rest t."""
    if not s.is_tau_maximal():
        raise StructureError("to_mom_coloring needs a maximal structure")
    g = s.tri.dual_graph()
    colors = ["f"] * g.edge_count
    for c in s.laterals:
        # peel leaves off the region's graph; what survives is its cycle
        faces = set(c.faces)
        deg: dict[int, int] = {}
        for f in faces:
            for v in g.ends(f):
                deg[v] = deg.get(v, 0) + 1
        live = set(faces)
        changed = True
        while changed:
            changed = False
            for f in sorted(live):
                a, b = g.ends(f)
                if a != b and (deg[a] == 1 or deg[b] == 1):
                    live.discard(f)
                    deg[a] -= 1
                    deg[b] -= 1
                    changed = True
        chord = min(live)
        for f in faces:
            colors[f] = "c" if f == chord else "t"
    gamma = MomColoring(g, tuple(colors))
    if classify(gamma) == "invalid":
        raise AssertionError("dual coloring is not a Mom-subgraph")
    return gamma


def from_mom_coloring(tri: IdealTriangulation, gamma: MomColoring) -> InducedProtoMom:
    if classify(gamma) == "invalid":
        raise StructureError("coloring is not a general Mom-subgraph")
    if gamma.graph.edge_count != len(tri.face_classes) or gamma.graph.vertex_count != tri.tet_count:
        raise StructureError("coloring lives on a different graph")
    return InducedProtoMom(tri, frozenset(range(len(tri.edge_classes))), frozenset(gamma.edges_of("f")))


def maximal_structures(tri: IdealTriangulation) -> list[InducedProtoMom]:
    """Distinct images of the general Mom-subgraphs of the dual graph."""
    seen = {}
    for gamma in enumerate_moms(tri.dual_graph(), GENERAL):
        s = from_mom_coloring(tri, gamma)
        seen.setdefault(s.key(), s)
    return [seen[k] for k in sorted(seen)]


def brute_force_maximal(tri: IdealTriangulation) -> list[InducedProtoMom]:
    """Maximal internal-valid structures by inclusion, over all edge and face subsets."""
    ne, nf = len(tri.edge_classes), len(tri.face_classes)
    valid = []
    for fm in range(1 << nf):
        faces = frozenset(i for i in range(nf) if fm >> i & 1)
        for em in range(1 << ne):
            edges = frozenset(i for i in range(ne) if em >> i & 1)
            s = InducedProtoMom(tri, edges, faces)
            if s.is_internal_valid():
                valid.append(s)
    out = []
    for s in valid:
        if not any(o is not s and s.kept_edges <= o.kept_edges and s.kept_faces <= o.kept_faces
                   and (s.kept_edges, s.kept_faces) != (o.kept_edges, o.kept_faces) for o in valid):
            out.append(s)
    return sorted(out, key=lambda x: x.key())


def handle_count_ok(s: InducedProtoMom) -> bool:
    """#1-handles = #2-handles - (boundary genus) + (boundary components)."""
    genera = [g for _, g in s.tri.boundary_genera()]
    return len(s.kept_edges) == len(s.kept_faces) - sum(genera) + len(genera)


# -- C-moves ------------------------------------------------------------------------------


def c_collapse(s: InducedProtoMom, e: int) -> InducedProtoMom:
    """Remove kept edge ``e`` of valence 1 together with its kept face."""
    if e not in s.kept_edges:
        raise StructureError(f"edge {e} is not kept")
    if s.valence[e] != 1:
        raise StructureError(f"edge {e} has valence {s.valence[e]}, need 1")
    (f,) = [f for f in s.kept_faces if e in s.incidences[f]]
    return s.with_sets(s.kept_edges - {e}, s.kept_faces - {f})


def c_expand(s: InducedProtoMom, e: int, f: int) -> InducedProtoMom:
    """Add unkept edge ``e`` with unkept face ``f`` running once along it."""
    if e in s.kept_edges or f in s.kept_faces:
        raise StructureError("c_expand needs an unkept edge and an unkept face")
    inc = list(s.incidences[f])
    if inc.count(e) != 1:
        raise StructureError(f"face {f} runs {inc.count(e)} times along edge {e}, need 1")
    inc.remove(e)
    if any(x not in s.kept_edges for x in inc):
        raise StructureError(f"face {f} has another unkept edge")
    out = s.with_sets(s.kept_edges | {e}, s.kept_faces | {f})
    if out.lateral_kinds() != s.lateral_kinds():
        raise AssertionError("expansion changed the lateral regions")
    return out


def legal_expansions(s: InducedProtoMom) -> list[tuple[int, int]]:
    out = []
    for e in range(len(s.tri.edge_classes)):
        if e in s.kept_edges:
            continue
        for f in s.unkept_faces:
            inc = list(s.incidences[f])
            if inc.count(e) == 1:
                inc.remove(e)
                if all(x in s.kept_edges for x in inc):
                    out.append((e, f))
    return out


def expand_to_maximal(s: InducedProtoMom) -> tuple[InducedProtoMom, list[Move]]:
    """C-expansions until every edge is kept (lowest legal pair first)."""
    moves = []
    while len(s.kept_edges) < len(s.tri.edge_classes):
        cand = legal_expansions(s)
        if not cand:
            raise StructureError("no C-expansion available; structure cannot reach a maximal one")
        e, f = cand[0]
        s = c_expand(s, e, f)
        moves.append(Move("c_expand", (e, f)))
    return s, moves


def normalize_to_genuine(s: InducedProtoMom) -> tuple[InducedProtoMom, MoveTrace, tuple[int, ...]]:
    """Collapse valence-1 edges until none is left; also report stuck valence-0 edges."""
    moves = []
    while True:
        ones = sorted(e for e, v in s.valence.items() if v == 1)
        if not ones:
            break
        s = c_collapse(s, ones[0])
        moves.append(Move("c_collapse", (ones[0],)))
    stuck = tuple(sorted(e for e, v in s.valence.items() if v == 0))
    if stuck:
        log.info("valence-0 1-handles left in place: %s", stuck)
    return s, MoveTrace.from_moves(moves, [s.census() for _ in moves]), stuck


# -- M-moves ------------------------------------------------------------------------------


def m_move(s: InducedProtoMom, move: Move, gamma: MomColoring | None = None) -> InducedProtoMom:
    """Apply a Mom-subgraph move through the duality.

    ``gamma`` fixes the coloring the move refers to; it defaults to
    ``to_mom_coloring(s)``.
    """
    if gamma is None:
        gamma = to_mom_coloring(s)
    elif frozenset(gamma.edges_of("f")) != s.kept_faces or not s.is_tau_maximal():
        raise StructureError("coloring is not dual to the structure")
    try:
        out = apply_move(gamma, move)
    except MoveError as exc:
        raise StructureError(f"inadmissible move {move}: {exc}") from exc
    return from_mom_coloring(s.tri, out)


# -- relating structures ----------------------------------------------------------------------

C_KINDS = ("c_expand", "c_collapse")


def replay_structure(s: InducedProtoMom, trace: Iterable[Move], check: bool = True) -> list[InducedProtoMom]:
    """All states visited by ``trace``; M-moves act on the running dual coloring."""
    states = [s]
    gamma = None
    for mv in trace:
        if mv.kind == "c_expand":
            s, gamma = c_expand(s, *mv.params), None
        elif mv.kind == "c_collapse":
            s, gamma = c_collapse(s, *mv.params), None
        else:
            if gamma is None:
                gamma = to_mom_coloring(s)
            try:
                gamma = apply_move(gamma, mv)
            except MoveError as exc:
                raise StructureError(f"inadmissible move {mv}: {exc}") from exc
            s = from_mom_coloring(s.tri, gamma)
        if check and not s.is_internal_valid():
            raise AssertionError(f"state after {mv} is not internal-valid")
        states.append(s)
    return states


def relate(s1: InducedProtoMom, s2: InducedProtoMom) -> MoveTrace:
    """C- and M-moves taking ``s1`` to ``s2`` (same triangulation)."""
    if s1.tri != s2.tri:
        raise StructureError("structures live on different triangulations; bridge them first")
    for s in (s1, s2):
        if not s.is_internal_valid():
            raise StructureError("relate needs internal-valid structures")
    if s1.key() == s2.key():
        return MoveTrace.from_moves([])
    m1, up1 = expand_to_maximal(s1)
    m2, up2 = expand_to_maximal(s2)
    g1, g2 = to_mom_coloring(m1), to_mom_coloring(m2)
    middle = expand(relate_moms(g1, g2), g1)
    down = [Move("c_collapse", (mv.params[0],)) for mv in reversed(up2)]
    moves = list(up1) + list(middle) + down
    states = replay_structure(s1, moves)
    if states[-1].key() != s2.key():
        raise AssertionError("relating trace does not end at the target")
    return MoveTrace.from_moves(moves, [x.census() for x in states[1:]])


# -- the 2-3 bridge --------------------------------------------------------------------------


@dataclass(frozen=True)
class Bridge:
    pachner: PachnerResult
    structure: InducedProtoMom  # reinterpreted on the new triangulation, not yet maximal
    expansions: tuple[tuple[int, int], ...]  # the three (new edge, new face) choices


def pachner_bridge(s: InducedProtoMom, face: int) -> Bridge:
    tri = s.tri
    if face in s.kept_faces:
        raise StructureError(f"face {face} is kept; pick a structure avoiding it")
    (t, _), (t2, _) = tri.face_classes[face]
    if t == t2:
        raise StructureError(f"face {face} glues a tetrahedron to itself")
    pr = pachner23(tri, face)
    edges = frozenset(pr.edge_map[e] for e in s.kept_edges)
    faces = frozenset(pr.face_map[f] for f in s.kept_faces)
    out = InducedProtoMom(pr.triangulation, edges, faces)
    if sorted(out.lateral_kinds()) != sorted(s.lateral_kinds()):
        raise AssertionError("bridge changed the lateral regions")
    return Bridge(pr, out, tuple((pr.new_edge, f) for f in pr.new_faces))


# -- lateral tori and reassembly ---------------------------------------------------------------


@dataclass(frozen=True)
class LateralPiece:
    lateral: Lateral
    complex: IdealTriangulation  # the region's tetrahedra glued along its unkept faces
    surface: object  # BoundarySurface of ``complex``; local tet t is lateral.tets[t]
    meridian: tuple[int, ...]


def _region_complex(s: InducedProtoMom, comp: Lateral) -> IdealTriangulation:
    local = {t: i for i, t in enumerate(comp.tets)}
    gl = []
    for f in comp.faces:
        (t, ff), _ = s.tri.face_classes[f]
        t2, p = s.tri.gluing[t][ff]
        gl.append((local[t], ff, local[t2], p))
    return IdealTriangulation.from_gluings(len(comp.tets), gl)


def induced_lateral_triangulation(s: InducedProtoMom, comp: Lateral | int,
                                  require_full: bool = True) -> LateralPiece:
    """Triangulated lateral torus: kept-face sides facing the region, lakes pinched to points."""
    from .solid_torus import _delta_chain, _delta_complex, complex_of, edge_chain
    from .homology import primitive
    if isinstance(comp, int):
        comp = s.laterals[comp]
    if comp.kind != TORUS:
        raise StructureError(f"lateral region {comp.tets} is a {comp.kind}, not a torus")
    if require_full and not s.is_full():
        raise StructureError("structure is not full: some lake is not a disc")
    kc = _region_complex(s, comp)
    bs = boundary_surface(kc)
    surf = bs.surface
    if not surf.is_torus():
        raise StructureError(f"lateral surface of region {comp.tets} is not a torus")
    dc = complex_of(kc)
    refs = [(("t", t), cs) for t, _, cs in bs.faces]
    cols = [dc.edge_vector(edge_chain(surf, refs, e)) for e in range(surf.edge_count)]
    ddc = _delta_complex(surf)
    for alpha in dc.nullspace_with(cols):
        vec = primitive(alpha)
        if ddc.solve_with([], ddc.edge_vector(_delta_chain(surf, vec))) is None:
            return LateralPiece(comp, kc, bs, tuple(int(x) for x in vec))
    raise StructureError(f"no boundary curve of region {comp.tets} bounds in it")


@dataclass(frozen=True)
class AssemblyCertificate:
    valid: bool
    genera_equal: bool
    homology_equal: bool
    induced: bool
    pieces: tuple[tuple[int, int, int, int], ...]  # (triangles, vertices, fill tets, fill vertices)
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.valid and self.genera_equal and self.homology_equal and self.induced and not self.problems

    def to_text(self) -> str:
        lines = [f"valid {int(self.valid)}", f"genera-equal {int(self.genera_equal)}",
                 f"homology-equal {int(self.homology_equal)}", f"induced {int(self.induced)}"]
        for i, (nt, nv, ft, fv) in enumerate(self.pieces):
            lines.append(f"piece {i} triangles {nt} vertices {nv} fill-tets {ft} fill-vertices {fv}")
        lines += [f"problem {p}" for p in self.problems]
        return "\n".join(lines) + "\n"


def assemble_ideal_triangulation(s: InducedProtoMom, require_full: bool = True):
    """Refill every lateral torus with a solid torus and glue along the kept faces.

    Returns (new triangulation, induced structure on it, certificate).
    """
    from .solid_torus import fill_solid_torus
    if not s.is_internal_valid():
        raise StructureError("assembly needs an internal-valid structure")
    pieces = [induced_lateral_triangulation(s, c, require_full) for c in s.laterals]
    fills = [fill_solid_torus(p.surface.surface, p.meridian) for p in pieces]
    offsets = []
    n = 0
    for ft in fills:
        offsets.append(n)
        n += ft.tet_count
    gluings = []
    for off, ft in zip(offsets, fills):
        gluings += [(t + off, f, t2 + off, p) for t, f, t2, p in ft.complex.gluing_list()]
    # where each kept-face side sits: (piece, boundary triangle)
    side_at = {}
    for i, p in enumerate(pieces):
        for j, (lt, f, _) in enumerate(p.surface.faces):
            side_at[(p.lateral.tets[lt], f)] = (i, j)

    def fill_vertex(i, j, x):
        """Global tet and its vertex sitting at original tet vertex x of boundary triangle j."""
        cs = pieces[i].surface.faces[j][2]
        k, vs = fills[i].boundary[j]
        return offsets[i] + k, vs[cs.index(x)]

    face_image = {}
    for f in sorted(s.kept_faces):
        (t, ff), (t2, ff2) = s.tri.face_classes[f]
        p = s.tri.gluing[t][ff][1]
        i1, j1 = side_at[(t, ff)]
        i2, j2 = side_at[(t2, ff2)]
        pairs = {}
        k1 = k2 = None
        for x in face_corners(ff):
            k1, a = fill_vertex(i1, j1, x)
            k2, b = fill_vertex(i2, j2, p[x])
            pairs[a] = b
        (g,) = set(range(4)) - set(pairs)
        gluings.append((k1, g, k2, complete_perm(pairs)))
        face_image[f] = (k1, g)
    new = IdealTriangulation.from_gluings(n, gluings)
    cert_problems = []
    rep = new.validate()
    genera_equal = rep.valid and sorted(g for _, g in rep.boundary) == sorted(
        g for _, g in s.tri.boundary_genera())
    homology_equal = rep.valid and new.homology_h1() == s.tri.homology_h1()
    # edge correspondence along every lateral surface
    emap: dict[int, set] = {}
    for i, p in enumerate(pieces):
        for j, (lt, _, cs) in enumerate(p.surface.faces):
            t = p.lateral.tets[lt]
            for a, b in combinations(cs, 2):
                ka, va = fill_vertex(i, j, a)
                _, vb = fill_vertex(i, j, b)
                emap.setdefault(s.tri.edge_of(t, a, b), set()).add(new.edge_of(ka, va, vb))
    induced = True
    if any(len(v) != 1 for v in emap.values()):
        cert_problems.append("an edge of the lateral surfaces splits in the new triangulation")
        induced = False
    images = [next(iter(v)) for v in emap.values()]
    if len(set(images)) != len(images):
        cert_problems.append("distinct 1-handles merge in the new triangulation")
        induced = False
    s2 = None
    if induced and rep.valid:
        edges = frozenset(images)
        faces = frozenset(new.face_class_of[x] for x in face_image.values())
        s2 = InducedProtoMom(new, edges, faces)
        if set(emap) != set(s.kept_edges):
            cert_problems.append("kept edges and lateral edges differ")
        if not s2.is_internal_valid():
            cert_problems.append("induced structure is not internal-valid")
        if len(s2.laterals) != len(s.laterals):
            cert_problems.append("lateral region count changed")
        for f, x in face_image.items():
            want = sorted(next(iter(emap[e])) for e in s.incidences[f])
            if sorted(new.face_edge_incidences(new.face_class_of[x])) != want:
                cert_problems.append(f"face {f} does not bound the matching 1-handles")
        induced = not cert_problems
    piece_info = []
    for p, ft in zip(pieces, fills):
        surf = p.surface.surface
        piece_info.append((surf.triangle_count, surf.vertex_count, ft.tet_count, ft.complex.vertex_count))
        if surf.vertex_count != ft.complex.vertex_count:
            cert_problems.append("fill vertex count differs from its lateral surface")
    cert = AssemblyCertificate(rep.valid, genera_equal, homology_equal, induced,
                               tuple(piece_info), tuple(cert_problems))
    return new, s2, cert


# -- state space of structures -------------------------------------------------------------


def internal_valid_structures(tri: IdealTriangulation) -> list[InducedProtoMom]:
    """Every internal-valid structure, by brute force over edge and face subsets."""
    ne, nf = len(tri.edge_classes), len(tri.face_classes)
    out = []
    for fm in range(1 << nf):
        faces = frozenset(i for i in range(nf) if fm >> i & 1)
        for em in range(1 << ne):
            s = InducedProtoMom(tri, frozenset(i for i in range(ne) if em >> i & 1), faces)
            if s.is_internal_valid():
                out.append(s)
    return out


def structure_moves(s: InducedProtoMom, colorings: dict | None = None):
    """(move, result) for every C-move and every M-move (through any dual coloring)."""
    for e in sorted(s.kept_edges):
        if s.valence[e] == 1:
            yield Move("c_collapse", (e,)), c_collapse(s, e)
    for e, f in legal_expansions(s):
        yield Move("c_expand", (e, f)), c_expand(s, e, f)
    if s.is_tau_maximal():
        if colorings is None:
            colorings = dual_colorings(s.tri)
        from .mom_subgraph import ADMISSIBLE, legal_moves
        for gamma in colorings.get(s.kept_faces, ()):
            for mv, out in legal_moves(gamma, ADMISSIBLE):
                yield mv, from_mom_coloring(s.tri, out)


def dual_colorings(tri: IdealTriangulation) -> dict[frozenset, list[MomColoring]]:
    out: dict[frozenset, list[MomColoring]] = {}
    for gamma in enumerate_moms(tri.dual_graph(), GENERAL):
        out.setdefault(frozenset(gamma.edges_of("f")), []).append(gamma)
    return out


@dataclass(frozen=True)
class StructureConnectivity:
    states: int
    full_states: int
    full_components: int  # components of the move graph that contain a full state
    all_toral: bool

    @property
    def connected(self) -> bool:
        return self.full_components == 1 and self.all_toral


def verify_structure_connectivity(tri: IdealTriangulation) -> StructureConnectivity:
    """BFS from the full structures under M- and C-moves; intermediate states may be non-full."""
    colorings = dual_colorings(tri)
    full = [s for s in internal_valid_structures(tri) if s.is_full()]
    comp: dict = {}
    all_toral = True
    n = 0
    for start in full:
        if start.key() in comp:
            continue
        label = n
        n += 1
        comp[start.key()] = label
        queue = [start]
        while queue:
            s = queue.pop()
            all_toral &= all(k == TORUS for k in s.lateral_kinds())
            for _, t in structure_moves(s, colorings):
                if t.key() not in comp and t.is_internal_valid():
                    comp[t.key()] = label
                    queue.append(t)
    labels = {comp[s.key()] for s in full}
    return StructureConnectivity(len(comp), len(full), len(labels), all_toral)
