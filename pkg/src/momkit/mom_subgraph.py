"""Mom-subgraphs: {t, c, f} edge colorings of connected 4-valent graphs.

A coloring is *general* when the t-edges form a spanning forest and every
tree carries exactly one c-edge with both ends on it; it is *minimal* when
that forest is a single tree.  Moves are applied at explicit edge/vertex ids
so that traces replay exactly.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .graph_core import Multigraph, tree_path, vertex_components
from .trace import Move, MoveTrace

log = logging.getLogger(__name__)

COLORS = ("t", "c", "f")
MINIMAL, GENERAL, INVALID = "minimal", "general", "invalid"
MOVE_KINDS = ("m1", "m2", "m2tilde", "m2prime", "m3", "m3bar")
ADMISSIBLE = ("m1", "m2", "m2prime", "m3", "m3bar")


class MoveError(ValueError):
    """A move was requested where its preconditions do not hold."""


@dataclass(frozen=True)
class MomColoring:
    graph: Multigraph
    colors: tuple[str, ...]

    def __post_init__(self):
        colors = tuple(self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != self.graph.edge_count:
            raise ValueError("one color per edge required")
        if any(c not in COLORS for c in colors):
            raise ValueError(f"colors must be in {COLORS}")

    def __getitem__(self, e: int) -> str:
        return self.colors[e]

    def edges_of(self, color: str) -> tuple[int, ...]:
        return tuple(e for e, c in enumerate(self.colors) if c == color)

    def recolor(self, changes: dict[int, str]) -> "MomColoring":
        cols = list(self.colors)
        for e, c in changes.items():
            cols[e] = c
        return MomColoring(self.graph, tuple(cols))

    @cached_property
    def comp(self) -> tuple[int, ...]:
        """Label of the t-component containing each vertex."""
        g = self.graph
        return tuple(vertex_components(g.vertex_count, (g.ends(e) for e in self.edges_of("t"))))

    @cached_property
    def kind(self) -> str:
        return classify(self)

    @cached_property
    def c_edge_of(self) -> dict[int, int]:
        """t-component label -> its c-edge (valid colorings only)."""
        return {self.comp[self.graph.ends(e)[0]]: e for e in self.edges_of("c")}

    @property
    def k(self) -> int:
        return len(set(self.comp))

    def tree_edges(self, label: int) -> set[int]:
        g = self.graph
        return {e for e in self.edges_of("t") if self.comp[g.ends(e)[0]] == label}

    def cycle(self, label: int) -> list[int]:
        """Edges of the cycle C_i: the c-edge of component ``label`` plus its tree path."""
        e = self.c_edge_of[label]
        u, v = self.graph.ends(e)
        return [e] + (tree_path(self.graph, self.edges_of("t"), v, u) or [])

    def cycle_vertices(self, label: int) -> set[int]:
        g = self.graph
        out = set()
        for e in self.cycle(label):
            out.update(g.ends(e))
        return out


def classify(gamma: MomColoring) -> str:
    g = gamma.graph
    t_edges = gamma.edges_of("t")
    comp = vertex_components(g.vertex_count, (g.ends(e) for e in t_edges))
    labels = set(comp)
    if len(t_edges) != g.vertex_count - len(labels):
        return INVALID  # some t-component contains a cycle
    per_comp = dict.fromkeys(labels, 0)
    for e in gamma.edges_of("c"):
        u, v = g.ends(e)
        if comp[u] != comp[v]:
            return INVALID
        per_comp[comp[u]] += 1
    if any(n != 1 for n in per_comp.values()):
        return INVALID
    return MINIMAL if len(labels) == 1 else GENERAL


def is_general(gamma: MomColoring) -> bool:
    return classify(gamma) != INVALID


def _shared(g: Multigraph, e1: int, e2: int, v: int | None = None) -> int:
    common = g.share_vertex(e1, e2)
    if v is None:
        if not common:
            raise MoveError(f"edges {e1} and {e2} share no vertex")
        return min(common)
    if v not in common:
        raise MoveError(f"edges {e1} and {e2} do not share vertex {v}")
    return v


def _finish(gamma: MomColoring, changes: dict[int, str], kind: str) -> MomColoring:
    out = gamma.recolor(changes)
    if classify(out) == INVALID:
        log.info("rejected %s %s on %s: result is not a Mom-subgraph", kind, changes, gamma.colors)
        raise MoveError(f"{kind}: result is not a valid Mom-subgraph")
    return out


def apply_m1(gamma: MomColoring, v: int, e: int, e2: int) -> MomColoring:
    if gamma[e] != "c" or gamma[e2] != "f":
        raise MoveError("m1 needs a c-edge and an f-edge")
    _shared(gamma.graph, e, e2, v)
    return _finish(gamma, {e: "f", e2: "c"}, "m1")


def apply_m2(gamma: MomColoring, v: int, e: int, e2: int) -> MomColoring:
    g = gamma.graph
    if gamma[e] != "t" or gamma[e2] == "t":
        raise MoveError("m2 needs a t-edge and a non-t edge")
    _shared(g, e, e2, v)
    a, b = g.ends(e2)
    if gamma.comp[a] != gamma.comp[b]:
        raise MoveError("m2: both ends of the non-tree edge must lie on one t-component")
    new_t = set(gamma.edges_of("t")) - {e} | {e2}
    comp = vertex_components(g.vertex_count, (g.ends(x) for x in new_t))
    if len(set(comp)) != gamma.k:
        raise MoveError("m2: swapped tree is disconnected")
    return _finish(gamma, {e: gamma[e2], e2: "t"}, "m2")


def _path_vertices(g: Multigraph, start: int, path: Sequence[int]) -> list[int]:
    out = [start]
    for e in path:
        a, b = g.ends(e)
        out.append(b if out[-1] == a else a)
    return out


def m2tilde_expansion(gamma: MomColoring, e: int, e2: int) -> list[Move]:
    """The single (m2) moves whose composition realises (m~2) at ``(e, e2)``.

    Walk from the nearer endpoint of ``e2`` along the tree path towards ``e``,
    passing the non-tree color one edge at a time.
    """
    g = gamma.graph
    if gamma[e] != "t" or gamma[e2] == "t":
        raise MoveError("m2tilde needs a t-edge and a non-t edge")
    u, w = g.ends(e2)
    if gamma.comp[u] != gamma.comp[w]:
        raise MoveError("m2tilde: non-tree edge must close a cycle in one t-component")
    path = tree_path(g, gamma.edges_of("t"), u, w) or []
    if e not in path:
        raise MoveError(f"m2tilde: edge {e} is not on the cycle of edge {e2}")
    j = path.index(e)
    verts = _path_vertices(g, u, path)
    if j <= len(path) - 1 - j:
        side, side_verts = path[: j + 1], verts[: j + 1]
    else:
        side = path[j:][::-1]
        side_verts = verts[j + 1 :][::-1]
    moves = []
    carrier = e2
    for edge, v in zip(side, side_verts):
        moves.append(Move("m2", (v, edge, carrier)))
        carrier = edge
    return moves


def apply_m2tilde(gamma: MomColoring, e: int, e2: int) -> tuple[MomColoring, list[Move]]:
    expansion = m2tilde_expansion(gamma, e, e2)
    out = gamma
    for mv in expansion:
        out = apply_m2(out, *mv.params)
    return out, expansion


def apply_m2prime(gamma: MomColoring, e: int, e2: int) -> MomColoring:
    g = gamma.graph
    if gamma.kind == INVALID:
        raise MoveError("m2prime on an invalid coloring")
    if gamma[e] != "f" or gamma[e2] != "t":
        raise MoveError("m2prime needs an f-edge and a t-edge")
    a, b = g.ends(e)
    if gamma.comp[a] == gamma.comp[b]:
        raise MoveError("m2prime: f-edge must join two different t-components")
    j = gamma.comp[g.ends(e2)[0]]
    ends_on_j = [x for x in (a, b) if gamma.comp[x] == j]
    if not ends_on_j:
        raise MoveError("m2prime: t-edge is not on a component touched by the f-edge")
    v = ends_on_j[0]
    if v not in g.ends(e2):
        raise MoveError("m2prime: edges are not incident at the endpoint on T_j")
    cyc = set(gamma.cycle(j))
    cyc_v = gamma.cycle_vertices(j)
    if e2 in cyc or v in cyc_v:
        raise MoveError("m2prime: t-edge and vertex must avoid the cycle C_j")
    keep = (gamma.tree_edges(j) | cyc) - {e2}
    comp = vertex_components(g.vertex_count, (g.ends(x) for x in keep))
    if any(comp[v] == comp[x] for x in cyc_v):
        raise MoveError("m2prime: removing the t-edge does not separate v from C_j")
    return _finish(gamma, {e: "t", e2: "f"}, "m2prime")


def apply_m3(gamma: MomColoring, e: int, ej: int) -> MomColoring:
    g = gamma.graph
    if gamma.kind == INVALID:
        raise MoveError("m3 on an invalid coloring")
    if gamma[e] != "f" or gamma[ej] != "c":
        raise MoveError("m3 needs an f-edge and a c-edge")
    a, b = g.ends(e)
    if gamma.comp[a] == gamma.comp[b]:
        raise MoveError("m3: f-edge must join two different t-components")
    j = gamma.comp[g.ends(ej)[0]]
    if not any(x in g.ends(ej) and gamma.comp[x] == j for x in (a, b)):
        raise MoveError("m3: f-edge is not incident to the c-edge on T_j")
    return _finish(gamma, {e: "t", ej: "f"}, "m3")


def apply_m3bar(gamma: MomColoring, e: int, e2: int) -> MomColoring:
    g = gamma.graph
    if gamma.kind == INVALID:
        raise MoveError("m3bar on an invalid coloring")
    if gamma[e] != "t" or gamma[e2] != "f":
        raise MoveError("m3bar needs a t-edge and an f-edge")
    _shared(g, e, e2)
    i = gamma.comp[g.ends(e)[0]]
    rest = gamma.tree_edges(i) - {e}
    comp = vertex_components(g.vertex_count, (g.ends(x) for x in rest))
    p, q = g.ends(e2)
    if comp[p] != comp[q] or gamma.comp[p] != i:
        raise MoveError("m3bar: f-edge must have both ends in one piece of T_i minus e")
    if any(comp[x] == comp[p] for x in g.ends(gamma.c_edge_of[i])):
        raise MoveError("m3bar: that piece touches the c-edge of T_i")
    return _finish(gamma, {e: "f", e2: "c"}, "m3bar")


def apply_move(gamma: MomColoring, move: Move) -> MomColoring:
    p = move.params
    if move.kind == "m1":
        return apply_m1(gamma, *p)
    if move.kind == "m2":
        return apply_m2(gamma, *p)
    if move.kind == "m2tilde":
        return apply_m2tilde(gamma, *p)[0]
    if move.kind == "m2prime":
        return apply_m2prime(gamma, *p)
    if move.kind == "m3":
        return apply_m3(gamma, *p)
    if move.kind == "m3bar":
        return apply_m3bar(gamma, *p)
    raise MoveError(f"unknown graph move {move.kind!r}")


def replay(gamma: MomColoring, trace: Iterable[Move]) -> MomColoring:
    for mv in trace:
        gamma = apply_move(gamma, mv)
    return gamma


def inverse_move(move: Move) -> Move:
    p = move.params
    if move.kind in ("m1", "m2"):
        return Move(move.kind, (p[0], p[2], p[1]))
    if move.kind in ("m2tilde", "m2prime"):
        return Move(move.kind, (p[1], p[0]))
    if move.kind == "m3":
        return Move("m3bar", p)
    if move.kind == "m3bar":
        return Move("m3", p)
    raise MoveError(f"unknown graph move {move.kind!r}")


def invert(trace: MoveTrace) -> MoveTrace:
    return MoveTrace.from_moves(inverse_move(m) for m in reversed(trace.moves))


def expand(trace: MoveTrace, start: MomColoring) -> MoveTrace:
    """Replace every composite (m~2) by its (m2) expansion."""
    out = []
    gamma = start
    for mv in trace:
        if mv.kind == "m2tilde":
            gamma, exp = apply_m2tilde(gamma, *mv.params)
            out.extend(exp)
        else:
            gamma = apply_move(gamma, mv)
            out.append(mv)
    return MoveTrace.from_moves(out)


def legal_moves(gamma: MomColoring, kinds: Sequence[str] = ADMISSIBLE):
    """Yield ``(move, result)`` for every applicable parameter choice."""
    g = gamma.graph
    E = range(g.edge_count)
    for kind in kinds:
        if kind in ("m1", "m2"):
            for e, e2 in itertools.permutations(E, 2):
                for v in sorted(g.share_vertex(e, e2)):
                    mv = Move(kind, (v, e, e2))
                    try:
                        yield mv, apply_move(gamma, mv)
                    except MoveError:
                        pass
        else:
            for e, e2 in itertools.permutations(E, 2):
                mv = Move(kind, (e, e2))
                try:
                    yield mv, apply_move(gamma, mv)
                except MoveError:
                    pass


# -- constructive algorithms -------------------------------------------------


def _dist_to(g: Multigraph, forest: set[int], src: int, targets: set[int]) -> tuple[int, list[int]]:
    """Shortest forest path from ``src`` to ``targets``: (length, edges)."""
    prev: dict[int, tuple[int, int] | None] = {src: None}
    q = deque([src])
    while q:
        v = q.popleft()
        if v in targets:
            path = []
            while prev[v] is not None:
                e, v = prev[v]
                path.append(e)
            return len(path), path[::-1]
        for e, w in sorted(g.incident(v)):
            if e in forest and w not in prev:
                prev[w] = (e, v)
                q.append(w)
    raise MoveError("target set unreachable in forest")


def reduce_to_minimal(gamma: MomColoring) -> MoveTrace:
    """Moves taking a general Mom-subgraph to a minimal one.

    Outer loop lowers the number of trees by one per (m3); inner steps use
    (m2') to walk the joining edge toward a cycle.  Notes record
    ``(k, m)`` before every move.
    """
    if classify(gamma) == INVALID:
        raise MoveError("reduce_to_minimal needs a general Mom-subgraph")
    g = gamma.graph
    moves: list[Move] = []
    notes: list[tuple[int, int]] = []

    def push(mv: Move, k: int, m: int):
        nonlocal gamma
        gamma = apply_move(gamma, mv)
        moves.append(mv)
        notes.append((k, m))

    while gamma.k > 1:
        forest = set(gamma.edges_of("t"))
        best = None
        for e in range(g.edge_count):
            a, b = g.ends(e)
            if gamma[e] != "f" or gamma.comp[a] == gamma.comp[b]:
                continue
            for near, far in ((a, b), (b, a)):
                lab = gamma.comp[near]
                d, path = _dist_to(g, forest, near, gamma.cycle_vertices(lab))
                key = (d, e)
                if best is None or key < best[0]:
                    best = (key, e, near, lab, path)
        (m, _), e, v, j, path = best
        k = gamma.k
        if m == 0:
            ej = gamma.c_edge_of[j]
            if v in g.ends(ej):
                push(Move("m3", (e, ej)), k, m)
            else:
                cyc = gamma.cycle(j)
                e1 = min(x for x in cyc if x != ej and v in g.ends(x))
                push(Move("m2tilde", (e1, ej)), k, m)
                push(Move("m3", (e, e1)), k, m)
        else:
            push(Move("m2prime", (e, path[0])), k, m)
    return MoveTrace.from_moves(moves, notes)


def _cycle_of(g: Multigraph, tree: set[int], chord: int) -> list[int]:
    u, v = g.ends(chord)
    return [chord] + (tree_path(g, tree, v, u) or [])


def relate_minimal(g1: MomColoring, g2: MomColoring) -> MoveTrace:
    """Moves (m1, m~2) transforming minimal ``g1`` into minimal ``g2``."""
    if g1.graph != g2.graph:
        raise MoveError("colorings live on different graphs")
    if classify(g1) != MINIMAL or classify(g2) != MINIMAL:
        raise MoveError("relate_minimal needs two minimal Mom-subgraphs")
    g = g1.graph
    moves: list[Move] = []
    cur = g1

    def push(mv: Move):
        nonlocal cur
        cur = apply_move(cur, mv)
        moves.append(mv)

    target_t = set(g2.edges_of("t"))
    guard = 0
    while cur.colors != g2.colors:
        guard += 1
        if guard > 10 * g.edge_count + 10:
            raise RuntimeError("relate_minimal failed to converge")
        t1 = set(cur.edges_of("t"))
        (c1,) = cur.edges_of("c")
        if t1 != target_t:
            outside = sorted(target_t - t1 - {c1})
            if outside:
                e2 = outside[0]
                u, w = g.ends(e2)
                path = tree_path(g, t1, u, w)
                e1 = min(x for x in path if g2[x] != "t")
                push(Move("m2tilde", (e1, e2)))
            else:
                cyc = _cycle_of(g, t1, c1)
                e1 = min(x for x in cyc if x != c1 and g2[x] != "t")
                push(Move("m2tilde", (e1, c1)))
            continue
        for mv in _move_c_edge(cur, g2):
            push(mv)
    return MoveTrace.from_moves(moves)


def _move_c_edge(cur: MomColoring, g2: MomColoring) -> list[Move]:
    """One round of the same-tree case: either finish, or shorten the distance."""
    g = cur.graph
    tree = set(cur.edges_of("t"))
    (c1,) = cur.edges_of("c")
    (c2,) = g2.edges_of("c")
    cyc1, cyc2 = _cycle_of(g, tree, c1), _cycle_of(g, tree, c2)
    v1 = {x for e in cyc1 for x in g.ends(e)}
    v2 = {x for e in cyc2 for x in g.ends(e)}
    common = v1 & v2
    if common:
        shared = set(cyc1) & set(cyc2)
        ends_of_path = [v for v in sorted(common)
                        if sum(1 for e in shared if v in g.ends(e)) <= 1]
        v = ends_of_path[0]
        a = min(e for e in cyc1 if e not in shared and v in g.ends(e))
        b = min(e for e in cyc2 if e not in shared and v in g.ends(e))
        seq = []
        if a != c1:
            seq.append(Move("m2tilde", (a, c1)))
        if b != c2:
            seq.append(Move("m2tilde", (b, c2)))
        seq.append(Move("m1", (v, a, b)))
        if b != c2:
            seq.append(Move("m2tilde", (c2, b)))
        if a != c1:
            seq.append(Move("m2tilde", (c1, a)))
        return seq
    dist = {}
    for s in sorted(v1):
        d, path = _dist_to(g, tree, s, v2)
        dist[s] = (d, path)
    w = min(dist, key=lambda s: (dist[s][0], s))
    ell = dist[w][1]
    first = ell[0]
    # T' = piece of tree minus w that contains the path
    rest = tree - {x for x in tree if w in g.ends(x)}
    comp = vertex_components(g.vertex_count, (g.ends(x) for x in rest))
    inner = next(x for x in g.ends(first) if x != w)
    in_tp = {x for x in range(g.vertex_count) if comp[x] == comp[inner] and x != w}
    e = None
    for cand in sorted(cur.edges_of("f")):
        p, q = g.ends(cand)
        if (p in in_tp) != (q in in_tp):
            e = cand
            break
    if e is None:
        raise RuntimeError("no f-edge leaves T' (impossible for 4-valent graphs)")
    p, q = g.ends(e)
    ell2 = tree_path(g, tree, p, q)
    a = min(x for x in cyc1 if w in g.ends(x) and x not in ell2)
    seq = []
    if a != c1:
        seq.append(Move("m2tilde", (a, c1)))
    seq.append(Move("m2tilde", (first, e)))
    seq.append(Move("m1", (w, a, first)))
    seq.append(Move("m2tilde", (e, first)))
    if a != c1:
        seq.append(Move("m2tilde", (c1, a)))
    return seq


def relate(g1: MomColoring, g2: MomColoring) -> MoveTrace:
    """Admissible moves relating two general Mom-subgraphs."""
    r1 = reduce_to_minimal(g1)
    r2 = reduce_to_minimal(g2)
    m1 = replay(g1, r1)
    m2 = replay(g2, r2)
    return r1 + relate_minimal(m1, m2) + invert(r2)


# -- enumeration and state-space checks --------------------------------------


def enumerate_moms(g: Multigraph, kind: str = GENERAL) -> list[MomColoring]:
    """Brute force over all 3^E colorings."""
    if not g.is_four_valent():
        raise ValueError("Mom-subgraphs are defined on 4-valent graphs")
    out = []
    for cols in itertools.product(COLORS, repeat=g.edge_count):
        gamma = MomColoring(g, cols)
        k = classify(gamma)
        if k == MINIMAL or (kind == GENERAL and k == GENERAL):
            out.append(gamma)
    return out


@dataclass(frozen=True)
class ConnectivityCertificate:
    states: int
    transitions: int
    components: int
    diameter: int
    kinds: tuple[str, ...]

    @property
    def connected(self) -> bool:
        return self.components == 1


def state_graph(g: Multigraph, kind: str = GENERAL, kinds: Sequence[str] = ADMISSIBLE):
    states = enumerate_moms(g, kind)
    index = {s.colors: i for i, s in enumerate(states)}
    adj: list[set[int]] = [set() for _ in states]
    for i, s in enumerate(states):
        for _, out in legal_moves(s, kinds):
            j = index.get(out.colors)
            if j is not None:
                adj[i].add(j)
    return states, adj


def _bfs(adj, src):
    dist = {src: 0}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def verify_move_connectivity(g: Multigraph, kind: str = GENERAL,
                             kinds: Sequence[str] = ADMISSIBLE) -> ConnectivityCertificate:
    states, adj = state_graph(g, kind, kinds)
    seen: set[int] = set()
    comps = 0
    diameter = 0
    for s in range(len(states)):
        if s not in seen:
            comps += 1
            seen |= set(_bfs(adj, s))
    for s in range(len(states)):
        diameter = max(diameter, max(_bfs(adj, s).values()))
    return ConnectivityCertificate(len(states), sum(map(len, adj)), comps, diameter, tuple(kinds))


# -- text format ---------------------------------------------------------------


def format_coloring(gamma: MomColoring) -> str:
    return "".join(f"edge {i} {c}\n" for i, c in enumerate(gamma.colors))


def parse_coloring(g: Multigraph, text: str) -> MomColoring:
    cols: dict[int, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 3 or tok[0] != "edge":
            raise ValueError(f"cannot parse coloring line {raw!r}")
        cols[int(tok[1])] = tok[2]
    if sorted(cols) != list(range(g.edge_count)):
        raise ValueError("coloring must list every edge exactly once")
    return MomColoring(g, tuple(cols[i] for i in range(g.edge_count)))
