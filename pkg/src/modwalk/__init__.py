"""Edge-minimum walks with modular length constraints.

An exact solver plus the structural machinery behind it: segment and
chunk decompositions of walks, cutwidth evaluation, problem reductions,
and brute-force oracles for desk-scale verification.
"""

from .graph_core import (CapacityError, DirectedGraph, SccChain, UndirectedGraph,
                         ValidationError, Walk, cutwidth_of_order, exact_cutwidth,
                         exact_cutwidth_order, modular_reachability, scc_chain,
                         shortest_modular_walk, spanned_subgraph)
from .solver import (Configuration, RequirementSpec, Solution, SolverParams,
                     closure, default_omega, extract_witnesses, forget,
                     introduce, is_final, solve, solve_with_stats)
from .walk_analysis import (Chunk, ChunkDecomposition, ChunkKind, Ordering,
                            Segment, SegmentDecomposition, Timestamp,
                            achievable_difference, achievable_subgroup,
                            chunk_decomposition, chunk_vertex_order,
                            rewrite_detour, segment_decomposition, timestamp,
                            timestamp_compare)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
