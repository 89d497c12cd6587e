"""Triangulation-induced handle structures, Mom-subgraph moves and solid-torus fillings."""
from .graph_core import Multigraph
from .ideal_tri import IdealTriangulation, boundary_surface, pachner23
from .mom_subgraph import MomColoring, classify, reduce_to_minimal, relate_minimal
from .protomom import (InducedProtoMom, assemble_ideal_triangulation, from_mom_coloring,
                       full_footprint, greedy_removal, to_mom_coloring)
from .solid_torus import fill_solid_torus, realize_theta
from .surface_tri import SurfaceTriangulation, simplify_torus
from .trace import Move, MoveTrace

__version__ = "0.1.0"

__all__ = [
    "IdealTriangulation", "InducedProtoMom", "MomColoring", "Move", "MoveTrace", "Multigraph",
    "SurfaceTriangulation", "assemble_ideal_triangulation", "boundary_surface", "classify",
    "fill_solid_torus", "from_mom_coloring", "full_footprint", "greedy_removal", "pachner23",
    "realize_theta", "reduce_to_minimal", "relate_minimal", "simplify_torus", "to_mom_coloring",
]
