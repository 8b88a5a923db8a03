"""Implicit graph engine and the analyses that run on it."""

from .base import (ExplicitGraph, Graph, ImplicitGraph, SolverGraph, Subgraph, VertexId,
                   line, mono, point)
from .io import export_graph, edge_lines, read_edges, report
from .iso import find_isomorphism, is_isomorphic
from .ops import (adjacency_dense, is_cover, lift_matches_extension, multiset_contains,
                  multiset_equal, numeric_spectrum, project, restrict, verify_ncc,
                  verify_ncc_explicit, voltage_lift)
from .traverse import (AboveCap, Components, CycleSearch, adjacency_csr, bfs_distances,
                       component_of, components, contains_cycle_of_length, cycle_witness,
                       diameter_of_component, eccentricities, girth, is_cycle,
                       orbit_representatives, orbits_from_generators, shortest_cycle_through,
                       to_explicit)

__all__ = [n for n in dir() if not n.startswith("_")]
