"""Command-line front end: ``momkit <verb> ...``.

Exit status is 0 when every check passes, 1 on an invariant violation and 2
when an input cannot be read or parsed.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus
from .ideal_tri import IdealTriangulation, TriangulationError
from .mom_subgraph import GENERAL, MINIMAL, verify_move_connectivity
from .protomom import (InducedProtoMom, StructureError, assemble_ideal_triangulation,
                       brute_force_maximal, full_footprint, greedy_removal, internal_valid_structures,
                       maximal_structures, relate, replay_structure, verify_structure_connectivity)
from .solid_torus import FillError, fill_solid_torus, fundamental_meridian
from .surface_tri import SurfaceError, SurfaceTriangulation, replay_surface, simplify_torus
from .trace import MoveTrace

log = logging.getLogger("momkit")


class InputError(Exception):
    pass


class CheckFailed(Exception):
    pass


def _read(path: str) -> str:
    try:
        return corpus.resolve(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _tri(path: str) -> IdealTriangulation:
    try:
        return IdealTriangulation.parse(_read(path))
    except (TriangulationError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _surface(path: str) -> SurfaceTriangulation:
    try:
        return SurfaceTriangulation.parse(_read(path))
    except (SurfaceError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _structure(path: str, tri: IdealTriangulation | None = None) -> InducedProtoMom:
    p = corpus.resolve(path)
    try:
        return InducedProtoMom.parse(p.read_text(), tri=tri, base_dir=p.parent)
    except FileNotFoundError:
        return InducedProtoMom.parse(p.read_text(), tri=tri, base_dir=corpus.fixture_dir())
    except (StructureError, TriangulationError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _structure_line(s: InducedProtoMom) -> str:
    return (f"keep-edges {' '.join(map(str, sorted(s.kept_edges)))} | "
            f"keep-faces {' '.join(map(str, sorted(s.kept_faces)))}")


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)


class Out:
    """Collects summary lines and mirrors them as JSON when asked."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}
        self.lines: list[str] = []

    def line(self, text: str):
        self.lines.append(text)

    def set(self, **kw):
        self.data.update(kw)

    def flush(self):
        if self.as_json:
            print(json.dumps(self.data, indent=2, sort_keys=True, default=list))
        else:
            for ln in self.lines:
                print(ln)


# -- verbs -----------------------------------------------------------------------------------


def cmd_validate(args, out: Out):
    tri = _tri(args.path)
    rep = tri.validate()
    out.line(rep.summary())
    out.set(summary=rep.summary(), valid=rep.valid, violations=list(rep.violations),
            tets=rep.tet_count, edge_classes=rep.edge_class_count,
            boundary_genera=[g for _, g in rep.boundary])
    for v in rep.violations:
        out.line(f"violation: {v}")
    if not rep.valid:
        raise CheckFailed("triangulation is not valid")


def cmd_dual(args, out: Out):
    from .graph_core import format_graph
    g = _tri(args.path).dual_graph()
    text = format_graph(g)
    out.line(text.rstrip("\n"))
    out.set(graph=text, vertices=g.vertex_count, edges=g.edge_count)


def cmd_enumerate(args, out: Out):
    tri = _tri(args.path)
    if args.max_size is not None and tri.tet_count > args.max_size:
        raise CheckFailed(f"{tri.tet_count} tetrahedra exceed --max-size {args.max_size}")
    if args.maximal:
        found = maximal_structures(tri)
        if [s.key() for s in found] != [s.key() for s in brute_force_maximal(tri)]:
            raise CheckFailed("Mom-subgraph image differs from the brute-force maximal set")
    else:
        found = internal_valid_structures(tri)
    for s in found:
        out.line(_structure_line(s))
    out.line(f"{len(found)} structures")
    out.set(count=len(found), structures=[{"edges": sorted(s.kept_edges), "faces": sorted(s.kept_faces),
                                           "full": s.is_full()} for s in found])


def cmd_remove(args, out: Out):
    tri = _tri(args.path)
    rng = random.Random(args.seed)
    rem = greedy_removal(full_footprint(tri), args.strategy, rng)
    for f, rule in rem.deletions:
        out.line(f"remove face {f} rule {rule}")
    s = rem.structure
    out.line(_structure_line(s))
    out.line(f"{len(rem.deletions)} deletions, {len(s.laterals)} lateral tori, "
             f"{'maximal' if s.is_tau_maximal() else 'not maximal'}")
    out.set(deletions=[list(x) for x in rem.deletions], edges=sorted(s.kept_edges),
            faces=sorted(s.kept_faces), maximal=s.is_tau_maximal())
    _write(args.trace_out, s.to_text(args.path))
    if not s.is_tau_maximal():
        raise CheckFailed("removal did not reach a maximal structure")


def cmd_relate(args, out: Out):
    s1 = _structure(args.first)
    s2 = _structure(args.second, tri=s1.tri)
    tr = relate(s1, s2)
    _write(args.trace_out, tr.to_text())
    out.line(tr.to_text().rstrip("\n") or "# identical structures")
    out.line(f"{len(tr)} moves")
    out.set(moves=json.loads(tr.to_json()), length=len(tr))


def cmd_simplify(args, out: Out):
    surf = _surface(args.path)
    tr = simplify_torus(surf)
    end = replay_surface(surf, tr)
    _write(args.trace_out, tr.to_text())
    _write(args.end_out, end.to_text())
    out.line(f"{len(tr)} moves")
    out.line(f"{end.triangle_count} triangles, {end.vertex_count} vertex, {end.edge_count} edges")
    out.set(moves=json.loads(tr.to_json()), triangles=end.triangle_count,
            vertices=end.vertex_count, edges=end.edge_count)
    if (end.triangle_count, end.vertex_count, end.edge_count) != (2, 1, 3):
        raise CheckFailed("simplification did not reach the two-triangle torus")


def cmd_fill(args, out: Out):
    surf = _surface(args.path)
    mu = [int(x) for x in args.meridian.split()] if args.meridian else fundamental_meridian(surf)
    ft = fill_solid_torus(surf, mu)
    _write(args.trace_out, ft.to_text())
    _write(args.end_out, ft.complex.to_text())
    out.line(f"meridian {' '.join(map(str, ft.meridian))}")
    out.line(f"{ft.tet_count} tets: {ft.count('layer')} layer, {ft.count('cap3')} cap3, "
             f"{ft.count('cap')} cap; {ft.folds} folds")
    out.set(meridian=list(ft.meridian), tets=ft.tet_count, layer=ft.count("layer"),
            cap3=ft.count("cap3"), cap=ft.count("cap"), folds=ft.folds)


def cmd_assemble(args, out: Out):
    s = _structure(args.path)
    new, _, cert = assemble_ideal_triangulation(s)
    _write(args.trace_out, cert.to_text())
    _write(args.end_out, new.to_text())
    out.line(cert.to_text().rstrip("\n"))
    out.line(new.validate().summary())
    out.set(ok=cert.ok, valid=cert.valid, genera_equal=cert.genera_equal,
            homology_equal=cert.homology_equal, induced=cert.induced,
            pieces=[list(p) for p in cert.pieces], problems=list(cert.problems), tets=new.tet_count)
    if not cert.ok:
        raise CheckFailed("assembly certificate failed")


def _mom_check(job):
    g, kind, kinds = job
    cert = verify_move_connectivity(g, kind, kinds)
    return g.vertex_count, g.edge_count, cert.states, cert.components, cert.connected


def cmd_verify_connectivity(args, out: Out):
    if args.path:
        res = verify_structure_connectivity(_tri(args.path))
        out.line(f"{res.states} states, {res.full_states} full, "
                 f"{res.full_components} component(s) holding full states, all toral: {res.all_toral}")
        out.set(states=res.states, full_states=res.full_states,
                components=res.full_components, all_toral=res.all_toral)
        if not res.connected:
            raise CheckFailed("full structures are not connected by moves")
        return
    kind = MINIMAL if args.minimal else GENERAL
    kinds = ("m1", "m2") if args.minimal else ("m1", "m2", "m2prime", "m3", "m3bar")
    graphs = corpus.four_valent_graphs(args.max_size or 3)
    jobs = [(g, kind, kinds) for g in graphs]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_mom_check, jobs))
    else:
        results = [_mom_check(j) for j in jobs]
    bad = 0
    rows = []
    for i, (v, e, n, comps, ok) in enumerate(results):
        out.line(f"graph {i}: {v} vertices, {e} edges, {n} {kind} states, {comps} component(s)")
        rows.append({"vertices": v, "edges": e, "states": n, "components": comps})
        bad += not ok
    out.line(f"{len(results)} graphs, {bad} disconnected")
    out.set(graphs=rows, disconnected=bad)
    if bad:
        raise CheckFailed("some state graph is disconnected")


def cmd_replay(args, out: Out):
    trace = MoveTrace.parse(_read(args.trace))
    if args.kind == "surface":
        end = replay_surface(_surface(args.start), trace)
        text = end.to_text()
    else:
        s = _structure(args.start)
        end_s = replay_structure(s, trace)[-1]
        text = end_s.to_text()
    _write(args.end_out, text)
    out.line(text.rstrip("\n"))
    out.set(end=text, moves=len(trace))


# -- parser ------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--json", action="store_true")
    common.add_argument("--trace-out", metavar="PATH")
    common.add_argument("--end-out", metavar="PATH", help="write the end state here")
    common.add_argument("--max-size", type=int, metavar="N")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="momkit", description="Triangulation-induced handle structures.")
    sub = p.add_subparsers(dest="verb", required=True)
    sp = sub.add_parser("validate", parents=[common], help="check a triangulation")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_validate)
    sp = sub.add_parser("dual", parents=[common], help="print the dual 4-valent graph")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_dual)
    sp = sub.add_parser("enumerate", parents=[common], help="list structures")
    sp.add_argument("path")
    sp.add_argument("--maximal", action="store_true")
    sp.set_defaults(func=cmd_enumerate)
    sp = sub.add_parser("remove", parents=[common], help="greedy 2-handle removal")
    sp.add_argument("path")
    sp.add_argument("--strategy", choices=["lowest", "random"], default="lowest")
    sp.set_defaults(func=cmd_remove)
    sp = sub.add_parser("relate", parents=[common], help="moves between two structures")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(func=cmd_relate)
    sp = sub.add_parser("simplify", parents=[common], help="reduce a torus to two triangles")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_simplify)
    sp = sub.add_parser("fill", parents=[common], help="fill a torus by a solid torus")
    sp.add_argument("path")
    sp.add_argument("--meridian", help="one integer per edge, space separated")
    sp.set_defaults(func=cmd_fill)
    sp = sub.add_parser("assemble", parents=[common], help="rebuild a triangulation from a structure")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_assemble)
    sp = sub.add_parser("verify-connectivity", parents=[common],
                        help="move connectivity on the graph corpus, or on a triangulation's structures")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--minimal", action="store_true")
    sp.set_defaults(func=cmd_verify_connectivity)
    sp = sub.add_parser("replay", parents=[common], help="replay a trace and print the end state")
    sp.add_argument("kind", choices=["surface", "structure"])
    sp.add_argument("start")
    sp.add_argument("trace")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Out(args.json)
    try:
        args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CheckFailed, StructureError, FillError, SurfaceError, TriangulationError) as exc:
        out.flush()
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
