"""Undirected multigraphs with explicit dart slots.

Loops and parallel edges are allowed.  An edge is a pair of endpoints
``(vertex, slot)``; a loop uses two distinct slots of the same vertex.
Graphs are immutable: every operation returns fresh values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Endpoint = tuple[int, int]


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Multigraph:
    vertex_count: int
    edges: tuple[tuple[Endpoint, Endpoint], ...] = ()
    _adj: tuple = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple((tuple(a), tuple(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        used = set()
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for i, (a, b) in enumerate(edges):
            for end in (a, b):
                if not 0 <= end[0] < self.vertex_count:
                    raise GraphError(f"edge {i}: vertex {end[0]} out of range")
                if end in used:
                    raise GraphError(f"edge {i}: dart slot {end} already used")
                used.add(end)
            adj[a[0]].append((i, b[0]))
            adj[b[0]].append((i, a[0]))
        object.__setattr__(self, "_adj", tuple(tuple(x) for x in adj))

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> "Multigraph":
        """Build a graph from vertex pairs, assigning slots in order of appearance."""
        nxt = [0] * vertex_count
        edges = []
        for u, v in pairs:
            a = (u, nxt[u])
            nxt[u] += 1
            b = (v, nxt[v])
            nxt[v] += 1
            edges.append((a, b))
        return cls(vertex_count, tuple(edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def ends(self, e: int) -> tuple[int, int]:
        a, b = self.edges[e]
        return a[0], b[0]

    def is_loop(self, e: int) -> bool:
        u, v = self.ends(e)
        return u == v

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(edge, other endpoint)`` pairs at ``v``; a loop is listed twice."""
        return self._adj[v]

    def incident_edges(self, v: int) -> set[int]:
        return {e for e, _ in self._adj[v]}

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def is_four_valent(self) -> bool:
        return all(self.degree(v) == 4 for v in range(self.vertex_count))

    def share_vertex(self, e1: int, e2: int) -> set[int]:
        return set(self.ends(e1)) & set(self.ends(e2))


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def vertex_components(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Component label (smallest member) of each of ``n`` vertices."""
    dsu = _DSU(n)
    for u, v in pairs:
        dsu.union(u, v)
    return [dsu.find(v) for v in range(n)]


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def components(g: Multigraph, edge_subset: Iterable[int] | None = None) -> list[Component]:
    """Connected components, optionally of the spanning subgraph on ``edge_subset``."""
    sub = range(g.edge_count) if edge_subset is None else sorted(set(edge_subset))
    labels = vertex_components(g.vertex_count, (g.ends(e) for e in sub))
    verts: dict[int, list[int]] = {}
    for v, lab in enumerate(labels):
        verts.setdefault(lab, []).append(v)
    edges: dict[int, list[int]] = {lab: [] for lab in verts}
    for e in sub:
        edges[labels[g.ends(e)[0]]].append(e)
    return [Component(tuple(verts[lab]), tuple(edges[lab])) for lab in sorted(verts)]


def betti1(g: Multigraph, component: Component) -> int:
    return len(component.edges) - len(component.vertices) + 1


def spanning_forest(g: Multigraph, edge_subset: Iterable[int] | None = None) -> tuple[int, ...]:
    """Lowest-index-first spanning forest (Kruskal order on edge ids)."""
    sub = range(g.edge_count) if edge_subset is None else sorted(set(edge_subset))
    dsu = _DSU(g.vertex_count)
    return tuple(e for e in sub if dsu.union(*g.ends(e)))


def is_spanning_forest(g: Multigraph, forest: Sequence[int]) -> bool:
    """Brute validator: acyclic and spanning each component of ``g``."""
    dsu = _DSU(g.vertex_count)
    for e in forest:
        if not dsu.union(*g.ends(e)):
            return False
    return len(components(g, forest)) == len(components(g))


def tree_path(g: Multigraph, forest: Iterable[int], src: int, dst: int) -> list[int] | None:
    """Edge sequence of the unique path from ``src`` to ``dst`` inside ``forest``."""
    forest = set(forest)
    prev: dict[int, tuple[int, int] | None] = {src: None}
    stack = [src]
    while stack:
        v = stack.pop()
        if v == dst:
            break
        for e, w in g.incident(v):
            if e in forest and w not in prev:
                prev[w] = (e, v)
                stack.append(w)
    if dst not in prev:
        return None
    path = []
    v = dst
    while prev[v] is not None:
        e, v = prev[v]
        path.append(e)
    path.reverse()
    return path


def fundamental_cycle(g: Multigraph, forest: Iterable[int], chord: int) -> list[int]:
    """Cycle of ``forest + chord`` as an edge walk starting at the chord.

    The walk follows the chord from its first endpoint to its second one and
    returns through the forest.
    """
    forest = set(forest)
    if chord in forest:
        raise GraphError(f"chord {chord} lies in the forest")
    u, v = g.ends(chord)
    if u == v:
        return [chord]
    path = tree_path(g, forest, v, u)
    if path is None:
        raise GraphError(f"endpoints of chord {chord} lie in different trees")
    return [chord] + path


def replay_walk(g: Multigraph, walk: Sequence[int], start: int) -> int | None:
    """Follow ``walk`` from ``start``; return the final vertex or None if broken."""
    v = start
    for e in walk:
        a, b = g.ends(e)
        if v == a:
            v = b
        elif v == b:
            v = a
        else:
            return None
    return v


def parse_graph(text: str) -> Multigraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "vertices" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "edge" and len(tok) == 3:
                ends = []
                for t in tok[1:]:
                    v, s = t.split(".")
                    ends.append((int(v), int(s)))
                edges.append(tuple(ends))
            else:
                raise ValueError(line)
        except ValueError as exc:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from exc
    if n is None:
        raise GraphError("missing 'vertices N' header")
    return Multigraph(n, tuple(edges))


def format_graph(g: Multigraph) -> str:
    lines = [f"vertices {g.vertex_count}"]
    for (a, sa), (b, sb) in g.edges:
        lines.append(f"edge {a}.{sa} {b}.{sb}")
    return "\n".join(lines) + "\n"
