"""Chain-level homology for the small complexes built in this package.

Two entry points: ``spine_h1`` computes integral H1 of a closed ideal
triangulation from its dual spine, and ``DeltaComplex`` assembles a
Delta-complex from tetrahedra and triangles glued along faces so that
rational questions (does this curve bound? which boundary class dies?) can
be answered exactly.
"""
from __future__ import annotations

from itertools import combinations
from math import gcd
from typing import Hashable, Sequence

from sympy import QQ, ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.matrices import DomainMatrix

from .ideal_tri import IdealTriangulation, _ParityDSU, perm_sign


def _rank(rows: list[list[int]], ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    return DomainMatrix([[QQ(x) for x in r] for r in rows], (len(rows), ncols), QQ).rank()


def spine_h1(tri: IdealTriangulation) -> tuple[int, tuple[int, ...]]:
    """Integral H1 as (free rank, torsion coefficients > 1).

    Chains: tetrahedra (0-cells), face classes (1-cells, oriented from their
    first side to their second) and edge classes (2-cells, attached along the
    cyclic walk around the edge).
    """
    faces = tri.face_classes
    nF, nT = len(faces), tri.tet_count
    d1 = [[0] * nF for _ in range(nT)]
    for j, ((t, _), (t2, _)) in enumerate(faces):
        d1[t2][j] += 1
        d1[t][j] -= 1
    d2 = []
    for ec in tri.edge_classes:
        row = [0] * nF
        t, (a, b) = ec.walk[0]
        c, d = (x for x in range(4) if x not in (a, b))
        start = (t, a, b, c, d)
        state = start
        for _ in range(len(ec.walk)):
            t, a, b, c, d = state
            j = tri.face_class_of[(t, d)]
            row[j] += 1 if faces[j][0] == (t, d) else -1
            t2, p = tri.gluing[t][d]
            state = (t2, p[a], p[b], p[d], p[c])
        d2.append(row)
    rank1 = _rank(d1, nF)
    if d2 and nF:
        inv = invariant_factors(Matrix(d2), domain=ZZ)
        inv = [int(abs(x)) for x in inv]
    else:
        inv = []
    rank2 = sum(1 for x in inv if x != 0)
    torsion = tuple(x for x in inv if x > 1)
    return nF - rank1 - rank2, torsion


class DeltaComplex:
    """Simplices (3 or 4 vertices) identified along ordered sub-simplices."""

    def __init__(self):
        self.cells: dict[Hashable, int] = {}
        self._glues: list[tuple[Hashable, tuple[int, ...], Hashable, tuple[int, ...]]] = []
        self._built = False

    def add(self, key: Hashable, n: int):
        if key in self.cells:
            raise ValueError(f"cell {key!r} added twice")
        self.cells[key] = n
        self._built = False

    def glue(self, key_a: Hashable, verts_a: Sequence[int], key_b: Hashable, verts_b: Sequence[int]):
        """Identify sub-simplex ``verts_a`` of ``key_a`` with ``verts_b`` of ``key_b`` in order."""
        if len(verts_a) != len(verts_b):
            raise ValueError("glued sub-simplices must have the same dimension")
        self._glues.append((key_a, tuple(verts_a), key_b, tuple(verts_b)))
        self._built = False

    def _build(self):
        if self._built:
            return
        vd, ed, td = _ParityDSU(), _ParityDSU(), _ParityDSU()
        for key, n in self.cells.items():
            for v in range(n):
                vd.find((key, v))
            for e in combinations(range(n), 2):
                ed.find((key, e))
            for f in combinations(range(n), 3):
                td.find((key, f))
        for ka, va, kb, vb in self._glues:
            m = dict(zip(va, vb))
            for v in va:
                vd.union((ka, v), (kb, m[v]), 1)
            for a, b in combinations(sorted(va), 2):
                x, y = m[a], m[b]
                ed.union((ka, (a, b)), (kb, (min(x, y), max(x, y))), 1 if x < y else -1)
            if len(va) == 3:
                src = tuple(sorted(va))
                img = [m[v] for v in src]
                td.union((ka, src), (kb, tuple(sorted(img))), perm_sign(img))
        self._vd, self._ed, self._td = vd, ed, td
        self.vertex_index = self._index(vd, ((k, v) for k, n in self.cells.items() for v in range(n)))
        self.edge_index = self._index(ed, ((k, e) for k, n in self.cells.items() for e in combinations(range(n), 2)))
        self.tri_index = self._index(td, ((k, f) for k, n in self.cells.items() for f in combinations(range(n), 3)))
        self._built = True

    @staticmethod
    def _index(dsu, items):
        out = {}
        for x in items:
            r = dsu.find(x)[0]
            out.setdefault(r, len(out))
        return out

    @property
    def counts(self) -> tuple[int, int, int]:
        self._build()
        return len(self.vertex_index), len(self.edge_index), len(self.tri_index)

    def vertex(self, key, v) -> int:
        self._build()
        return self.vertex_index[self._vd.find((key, v))[0]]

    def edge(self, key, a: int, b: int) -> tuple[int, int]:
        """(edge class, sign) of the oriented edge a -> b of cell ``key``."""
        self._build()
        r, s = self._ed.find((key, (min(a, b), max(a, b))))
        return self.edge_index[r], s if a < b else -s

    def edge_vector(self, chain: Sequence[tuple[Hashable, int, int, int]]) -> list[int]:
        """Edge-class vector of a formal sum of ``(key, a, b, coefficient)``."""
        vec = [0] * self.counts[1]
        for key, a, b, c in chain:
            i, s = self.edge(key, a, b)
            vec[i] += s * c
        return vec

    def boundary2(self) -> list[list[int]]:
        """Columns = triangle classes, rows = edge classes."""
        self._build()
        nE, nTri = len(self.edge_index), len(self.tri_index)
        cols = [[0] * nE for _ in range(nTri)]
        seen = set()
        for key, n in self.cells.items():
            for f in combinations(range(n), 3):
                r, s = self._td.find((key, f))
                j = self.tri_index[r]
                if j in seen:
                    continue
                seen.add(j)
                a, b, c = f
                for (x, y), coef in (((b, c), 1), ((a, c), -1), ((a, b), 1)):
                    i, es = self.edge(key, x, y)
                    cols[j][i] += s * coef * es
        return [list(r) for r in zip(*cols)] if cols else [[] for _ in range(nE)]

    def boundary1(self) -> list[list[int]]:
        self._build()
        nV, nE = len(self.vertex_index), len(self.edge_index)
        rows = [[0] * nE for _ in range(nV)]
        done = set()
        for key, n in self.cells.items():
            for a, b in combinations(range(n), 2):
                i, s = self.edge(key, a, b)
                if i in done:
                    continue
                done.add(i)
                # orient so that the class direction is a -> b when s = 1
                head, tail = (b, a) if s == 1 else (a, b)
                rows[self.vertex(key, head)][i] += 1
                rows[self.vertex(key, tail)][i] -= 1
        return rows

    def nullspace_with(self, columns: list[list[int]]) -> list[list]:
        """Rational solutions ``(alpha, beta)`` of ``sum alpha_i columns_i = d2 beta``.

        Returns a basis of the space of such ``alpha``.
        """
        d2 = self.boundary2()
        nE = self.counts[1]
        ncol = len(columns) + (len(d2[0]) if d2 and d2[0] else 0)
        rows = []
        for i in range(nE):
            row = [QQ(col[i]) for col in columns]
            row += [QQ(-x) for x in (d2[i] if d2 else [])]
            rows.append(row)
        ns = DomainMatrix(rows, (nE, ncol), QQ).nullspace()
        k = len(columns)
        if ns.shape[0] == 0 or k == 0:
            return []
        # project to alpha and keep an independent set
        rref, pivots = ns[:, :k].rref()
        m = rref.to_Matrix()
        return [[m[r, c] for c in range(k)] for r in range(len(pivots))]

    def solve_with(self, columns: list[list[int]], target: list[int]) -> list | None:
        """One rational ``alpha`` with ``sum alpha_i columns_i - target`` a boundary, or None."""
        d2 = self.boundary2()
        nE = self.counts[1]
        nb = len(d2[0]) if d2 and d2[0] else 0
        k = len(columns)
        aug = []
        for i in range(nE):
            row = [QQ(col[i]) for col in columns] + [QQ(-x) for x in (d2[i] if d2 else [])]
            row.append(QQ(target[i]))
            aug.append(row)
        rref, pivots = DomainMatrix(aug, (nE, k + nb + 1), QQ).rref()
        if k + nb in pivots:
            return None
        sol = [QQ(0)] * (k + nb)
        m = rref.to_Matrix()
        for r, c in enumerate(pivots):
            sol[c] = m[r, k + nb]
        return sol[:k]


def primitive(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (sign: first nonzero positive)."""
    from sympy import Rational, ilcm
    fr = [Rational(x) for x in vec]
    den = 1
    for x in fr:
        den = ilcm(den, x.q)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return tuple(x if lead > 0 else -x for x in ints)
