"""Small exhaustive corpora used by tests, the CLI and the acceptance suite."""
from __future__ import annotations

import itertools
import os
from pathlib import Path

from .graph_core import Multigraph, components


def _canonical(n: int, loops: tuple[int, ...], mult: dict[tuple[int, int], int]):
    best = None
    for perm in itertools.permutations(range(n)):
        key = (
            tuple(loops[perm.index(v)] for v in range(n)),
            tuple(sorted((min(perm[a], perm[b]), max(perm[a], perm[b]), m) for (a, b), m in mult.items() if m)),
        )
        if best is None or key < best:
            best = key
    return best


def four_valent_graphs(max_vertices: int = 3) -> list[Multigraph]:
    """Connected 4-valent multigraphs with at most ``max_vertices`` vertices, one per isomorphism class."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        seen = set()
        for loops in itertools.product(range(3), repeat=n):
            for ms in itertools.product(range(5), repeat=len(pairs)):
                deg = [2 * l for l in loops]
                for (a, b), m in zip(pairs, ms):
                    deg[a] += m
                    deg[b] += m
                if any(d != 4 for d in deg):
                    continue
                mult = dict(zip(pairs, ms))
                key = _canonical(n, loops, mult)
                if key in seen:
                    continue
                seen.add(key)
                edge_pairs = []
                for v, l in enumerate(loops):
                    edge_pairs += [(v, v)] * l
                for (a, b), m in mult.items():
                    edge_pairs += [(a, b)] * m
                g = Multigraph.from_pairs(n, edge_pairs)
                if len(components(g)) == 1:
                    out.append(g)
    return out


def fixture_dir() -> Path:
    """Corpus directory: ``$MOMKIT_FIXTURES`` if set, else the bundled fixtures."""
    env = os.environ.get("MOMKIT_FIXTURES")
    return Path(env) if env else Path(__file__).with_name("fixtures")


def resolve(path: str | os.PathLike) -> Path:
    """An existing path as given, else the same name inside the fixture directory."""
    p = Path(path)
    if p.exists():
        return p
    q = fixture_dir() / p.name
    if q.exists():
        return q
    raise FileNotFoundError(f"no such file or fixture: {path}")


def load_triangulation(name: str):
    from .ideal_tri import IdealTriangulation
    return IdealTriangulation.parse(resolve(name).read_text())


def small_fixtures(max_tets: int = 3) -> dict[str, "IdealTriangulation"]:
    """Valid ideal triangulations in the fixture directory with at most ``max_tets`` tetrahedra."""
    from .ideal_tri import IdealTriangulation
    out = {}
    for p in sorted(fixture_dir().glob("*.tri")):
        tri = IdealTriangulation.parse(p.read_text())
        if tri.tet_count <= max_tets and tri.is_valid():
            out[p.stem] = tri
    return out
