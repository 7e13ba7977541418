"""Brute-force reference implementations.

Everything here enumerates edge subsets exhaustively (in increasing
cardinality, or increasing total cost) and checks feasibility with plain
product-graph reachability, so it is correct by construction and usable
as ground truth for the solver and for every reduction round-trip.  All
oracles share a hard guard of 20 edges.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Mapping, Optional, Sequence

from .graph_core import (CapacityError, DirectedGraph, Edge, UndirectedGraph,
                         ValidationError, modular_reachability, scc_chain)
from .solver import RequirementSpec

MAX_ORACLE_EDGES = 20


def _guard(g: DirectedGraph) -> list[Edge]:
    edges = g.sorted_edges()
    if len(edges) > MAX_ORACLE_EDGES:
        raise CapacityError(f"oracle guard: {len(edges)} edges exceed the limit of {MAX_ORACLE_EDGES}")
    return edges


def feasible(g: DirectedGraph, edge_set: Iterable[Edge], spec: RequirementSpec) -> bool:
    """Does the subgraph on ``edge_set`` admit every required walk?"""
    sub = g.with_edges(edge_set)
    for s, t, r, qi in spec.pairs:
        if r not in modular_reachability(sub, s, qi)[t]:
            return False
    return True


def _strongly_connected_cover(g: DirectedGraph, edge_set: frozenset[Edge]) -> bool:
    """Is the edge-induced graph (on covered vertices) strongly connected?

    The empty edge set counts as strongly connected (nothing to connect).
    """
    covered = {v for e in edge_set for v in e}
    if not covered:
        return True
    sub = DirectedGraph(g.vertex_count, edge_set, vertices=covered)
    return len(scc_chain(sub)) == 1


def _touches_terminals(edge_set: frozenset[Edge], terminals: Iterable[int]) -> bool:
    covered = {v for e in edge_set for v in e}
    return all(t in covered for t in terminals)


def _subsets_by_cardinality(edges: Sequence[Edge]):
    for size in range(len(edges) + 1):
        yield from itertools.combinations(edges, size)


def _subsets_by_cost(edges: Sequence[Edge], g: DirectedGraph):
    """All subsets ordered by (total cost, cardinality, lexicographic)."""
    ranked = sorted(
        _subsets_by_cardinality(edges),
        key=lambda sub: (sum(g.edge_cost(e) for e in sub), len(sub), sub))
    yield from ranked


def brute_force_ewm(g: DirectedGraph, s: int, t: int, r: int, q: int,
                    *, use_costs: bool = False) -> Optional[tuple[int, frozenset[Edge]]]:
    """Minimum edge count (or cost) of a subgraph with an s->t walk of
    length r mod q, plus the first optimal subset; None if infeasible."""
    return brute_force_dsnm(g, RequirementSpec.ewm(s, t, r, q), use_costs=use_costs)


def brute_force_dsnm(g: DirectedGraph, spec: RequirementSpec,
                     *, use_costs: bool = False) -> Optional[tuple[int, frozenset[Edge]]]:
    """As brute_force_ewm with a k-requirement feasibility predicate."""
    edges = _guard(g)
    subsets = _subsets_by_cost(edges, g) if use_costs else _subsets_by_cardinality(edges)
    for sub in subsets:
        fs = frozenset(sub)
        if feasible(g, fs, spec):
            cost = sum(g.edge_cost(e) for e in fs) if use_costs else len(fs)
            return cost, fs
    return None


def all_optimal_ewm(g: DirectedGraph, s: int, t: int, r: int, q: int) -> list[frozenset[Edge]]:
    """Every minimum-cardinality feasible subset (for cutwidth sweeps)."""
    first = brute_force_ewm(g, s, t, r, q)
    if first is None:
        return []
    opt, _ = first
    spec = RequirementSpec.ewm(s, t, r, q)
    edges = _guard(g)
    return [frozenset(sub) for sub in itertools.combinations(edges, opt)
            if feasible(g, frozenset(sub), spec)]


def brute_force_scss(g: DirectedGraph, terminals: Sequence[int]
                     ) -> Optional[tuple[int, frozenset[Edge]]]:
    """Smallest strongly connected edge set with an edge at each terminal."""
    if not terminals:
        raise ValidationError("at least one terminal is required")
    for t in terminals:
        if t not in g.vertices:
            raise ValidationError(f"terminal {t} not in the graph")
    edges = _guard(g)
    for sub in _subsets_by_cardinality(edges):
        fs = frozenset(sub)
        if _touches_terminals(fs, terminals) and _strongly_connected_cover(g, fs):
            return len(fs), fs
    return None


def brute_force_scssm(g: DirectedGraph, spec: RequirementSpec
                      ) -> Optional[tuple[int, frozenset[Edge]]]:
    """Smallest strongly connected edge set satisfying all modular
    requirements; empty is allowed when no requirement forces an edge."""
    edges = _guard(g)
    for sub in _subsets_by_cardinality(edges):
        fs = frozenset(sub)
        if _strongly_connected_cover(g, fs) and feasible(g, fs, spec):
            return len(fs), fs
    return None


# Auxiliary oracles used by the reduction round-trip tests.

def modular_reachability_with_lengths(g: DirectedGraph, source: int, q: int
                                      ) -> dict[int, set[int]]:
    """Like modular_reachability, but each edge advances by its length."""
    if q < 1:
        raise ValidationError("q must be positive")
    reached: dict[int, set[int]] = {v: set() for v in g.vertices}
    reached[source].add(0)
    queue = deque([(source, 0)])
    while queue:
        v, r = queue.popleft()
        for u in g.successors(v):
            r2 = (r + g.edge_length((v, u))) % q
            if r2 not in reached[u]:
                reached[u].add(r2)
                queue.append((u, r2))
    return reached


def brute_force_ewm_lengths(g: DirectedGraph, s: int, t: int, r: int, q: int
                            ) -> Optional[tuple[int, frozenset[Edge]]]:
    """Edge-minimum subgraph with an s->t walk of total edge length r mod q."""
    edges = _guard(g)
    for sub in _subsets_by_cardinality(edges):
        fs = frozenset(sub)
        if r in modular_reachability_with_lengths(g.with_edges(fs), s, q)[t]:
            return len(fs), fs
    return None


def brute_force_ewm_vertex_costs(g: DirectedGraph, vertex_cost: Mapping[int, int],
                                 s: int, t: int, r: int, q: int
                                 ) -> Optional[tuple[int, frozenset[Edge]]]:
    """Minimum total vertex cost over feasible subgraphs.

    The cost of a candidate counts every vertex covered by its edges plus
    the endpoints s and t (the walk touches them even when empty).
    """
    edges = _guard(g)
    spec = RequirementSpec.ewm(s, t, r, q)
    best: Optional[tuple[int, frozenset[Edge]]] = None
    for sub in _subsets_by_cardinality(edges):
        fs = frozenset(sub)
        if not feasible(g, fs, spec):
            continue
        covered = {v for e in fs for v in e} | {s, t}
        cost = sum(vertex_cost.get(v, 1) for v in covered)
        if best is None or cost < best[0]:
            best = (cost, fs)
    return best


def brute_force_undirected_ewm(ug: UndirectedGraph, s: int, t: int, r: int, q: int
                               ) -> Optional[tuple[int, frozenset[tuple[int, int]]]]:
    """Edge-minimum undirected s-t walk of length r mod q (walks may
    re-traverse edges in either direction)."""
    edges = sorted(ug.edges)
    if len(edges) > MAX_ORACLE_EDGES:
        raise CapacityError(f"oracle guard: {len(edges)} edges exceed the limit of {MAX_ORACLE_EDGES}")
    for sub in _subsets_by_cardinality(edges):
        fs = frozenset(sub)
        directed = ug.bidirected(fs)
        if r in modular_reachability(directed, s, q)[t]:
            return len(fs), fs
    return None
