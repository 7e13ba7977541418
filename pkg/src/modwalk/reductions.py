"""Encode/decode reductions between problem variants.

Every reduction returns an artifact holding the transformed instance, a
deterministic name for each transformed vertex (source element id + role
+ index), and a per-edge back map, plus a ``decode`` method that maps a
transformed edge set back to source elements.  "Long self-loops" and
"edges of length L" are realized as fresh-vertex paths because graphs
carry no multi-edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .graph_core import (CapacityError, DirectedGraph, Edge, UndirectedGraph,
                         ValidationError, Walk)
from .solver import RequirementSpec

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)
MAX_PRIMORIAL_K = 8


def primorial(k: int) -> int:
    """Product of the first k primes (guarded at k = 8)."""
    if k < 1:
        raise ValidationError("k must be positive")
    if k > MAX_PRIMORIAL_K:
        raise CapacityError(f"primorial limited to k <= {MAX_PRIMORIAL_K}")
    out = 1
    for p in _PRIMES[:k]:
        out *= p
    return out


@dataclass
class ReductionArtifact:
    """Transformed instance plus the bookkeeping to map results back."""

    graph: DirectedGraph
    spec: RequirementSpec
    vertex_names: dict[int, str]
    back_map: dict[Edge, tuple]


class _Builder:
    """Accumulates vertices and edges of a transformed graph."""

    def __init__(self, base_count: int) -> None:
        self.next_vertex = base_count
        self.names: dict[int, str] = {v: f"v{v}" for v in range(base_count)}
        self.edges: list[Edge] = []
        self.back: dict[Edge, tuple] = {}

    def fresh(self, name: str) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.names[v] = name
        return v

    def add_edge(self, e: Edge, tag: tuple) -> None:
        if e in self.back:
            raise AssertionError(f"duplicate transformed edge {e}")
        self.edges.append(e)
        self.back[e] = tag

    def add_path(self, src: int, dst: int, inner: int, name: str, tag: tuple) -> None:
        """A directed path src -> dst through ``inner`` fresh vertices."""
        prev = src
        for i in range(inner):
            nxt = self.fresh(f"{name}.{i + 1}")
            self.add_edge((prev, nxt), tag)
            prev = nxt
        self.add_edge((prev, dst), tag)


@dataclass
class ScssToEwmArtifact(ReductionArtifact):
    source_graph: DirectedGraph
    terminals: tuple[int, ...]
    loop_lengths: tuple[int, ...]

    def decode(self, edge_set: Iterable[Edge]) -> frozenset[Edge]:
        """Source edges whose full subdivision is present."""
        chosen = frozenset(edge_set)
        q = self.spec.pairs[0][3]
        counts: dict[Edge, int] = {}
        for e in chosen:
            kind, payload = self.back_map[e][0], self.back_map[e][1]
            if kind == "edge":
                counts[payload] = counts.get(payload, 0) + 1
        return frozenset(e for e, c in counts.items() if c == q)


def scss_to_ewm(g: DirectedGraph, terminals: Sequence[int],
                k: Optional[int] = None) -> ScssToEwmArtifact:
    """Strongly-connected Steiner instance -> single modular-walk instance.

    Each source edge becomes a path of q fresh edges (q the primorial of
    k) and terminal i gains a fresh cycle of length q / p_i; a walk of
    length 1 mod q from the first terminal back to itself must then use
    every terminal cycle, forcing it to visit all terminals.  Terminal
    lists shorter than k are padded by repetition.
    """
    if not terminals:
        raise ValidationError("at least one terminal is required")
    if k is None:
        k = len(terminals)
    if k < len(terminals):
        raise ValidationError("k smaller than the number of terminals")
    if k > 4:
        raise CapacityError("scss_to_ewm limited to k <= 4 terminals")
    padded = list(terminals) + [terminals[-1]] * (k - len(terminals))
    for t in padded:
        if t not in g.vertices:
            raise ValidationError(f"terminal {t} not in the graph")

    q = primorial(k)
    loop_lengths = tuple(q // _PRIMES[i] for i in range(k))
    b = _Builder(g.vertex_count)
    for u, v in sorted(g.edges):
        b.add_path(u, v, q - 1, f"e{u}-{v}", ("edge", (u, v)))
    for i, t in enumerate(padded):
        ell = loop_lengths[i]
        b.add_path(t, t, ell - 1, f"t{i}", ("loop", i))

    graph = DirectedGraph(b.next_vertex, b.edges)
    spec = RequirementSpec.ewm(padded[0], padded[0], 1 % q, q)
    return ScssToEwmArtifact(graph=graph, spec=spec, vertex_names=b.names,
                             back_map=b.back, source_graph=g,
                             terminals=tuple(padded), loop_lengths=loop_lengths)


@dataclass
class LengthsToUnitArtifact(ReductionArtifact):
    source_graph: DirectedGraph
    path_lengths: dict[Edge, int]

    def decode(self, edge_set: Iterable[Edge]) -> frozenset[Edge]:
        chosen = frozenset(edge_set)
        counts: dict[Edge, int] = {}
        for e in chosen:
            kind, payload = self.back_map[e]
            if kind == "edge":
                counts[payload] = counts.get(payload, 0) + 1
        return frozenset(e for e, c in counts.items() if c == self.path_lengths[e])


def lengths_to_unit(g: DirectedGraph, s: int, t: int, r: int, q: int) -> LengthsToUnitArtifact:
    """Rewrite edge lengths away: edge e becomes a fresh unit path of
    (m+1)q + (length(e) mod q) edges, so remainders are preserved and the
    transformed cardinality is dominated by the number of source edges
    used."""
    if q < 1:
        raise ValidationError("q must be positive")
    if not 0 <= r < q:
        raise ValidationError(f"remainder {r} out of range 0..{q - 1}")
    m = len(g.edges)
    b = _Builder(g.vertex_count)
    path_lengths: dict[Edge, int] = {}
    for u, v in sorted(g.edges):
        L = (m + 1) * q + (g.edge_length((u, v)) % q)
        path_lengths[(u, v)] = L
        b.add_path(u, v, L - 1, f"e{u}-{v}", ("edge", (u, v)))
    graph = DirectedGraph(b.next_vertex, b.edges)
    spec = RequirementSpec.ewm(s, t, r, q)
    return LengthsToUnitArtifact(graph=graph, spec=spec, vertex_names=b.names,
                                 back_map=b.back, source_graph=g,
                                 path_lengths=path_lengths)


@dataclass
class VertexToEdgeCostArtifact(ReductionArtifact):
    source_graph: DirectedGraph
    path_first: dict[int, int]
    path_last: dict[int, int]

    def decode(self, edge_set: Iterable[Edge]) -> frozenset[Edge]:
        chosen = frozenset(edge_set)
        out = set()
        for e in chosen:
            kind, payload = self.back_map[e]
            if kind == "edge":
                out.add(payload)
        return frozenset(out)


def vertex_costs_to_edge_costs(g: DirectedGraph, vertex_cost: Mapping[int, int],
                               s: int, t: int, r: int, q: int) -> VertexToEdgeCostArtifact:
    """Move costs from vertices to edges.

    Every vertex becomes a directed path of q edges (incoming edges lead
    to the original vertex id, outgoing edges leave from the path's last
    vertex); one path edge carries the vertex cost.  Walk lengths change
    by a multiple of q per visit, so remainders are preserved.  The
    transformed source is s, the transformed target is the last vertex of
    t's path.  Missing vertex costs default to 1 (unit cost).
    """
    if q < 1:
        raise ValidationError("q must be positive")
    if s not in g.vertices or t not in g.vertices:
        raise ValidationError("endpoints must be vertices of the graph")
    b = _Builder(g.vertex_count)
    first: dict[int, int] = {}
    last: dict[int, int] = {}
    cost: dict[Edge, int] = {}
    for v in sorted(g.vertices):
        first[v] = v
        prev = v
        for i in range(q - 1):
            nxt = b.fresh(f"p{v}.{i + 1}")
            b.add_edge((prev, nxt), ("vertex", v))
            cost[(prev, nxt)] = vertex_cost.get(v, 1) if i == 0 else 0
            prev = nxt
        end = b.fresh(f"p{v}.last")
        b.add_edge((prev, end), ("vertex", v))
        # A one-edge path (q = 1) carries the vertex cost on its only edge.
        cost[(prev, end)] = vertex_cost.get(v, 1) if q == 1 else 0
        last[v] = end
    for u, v in sorted(g.edges):
        e = (last[u], first[v])
        b.add_edge(e, ("edge", (u, v)))
        cost[e] = 0
    graph = DirectedGraph(b.next_vertex, b.edges, cost=cost)
    spec = RequirementSpec.ewm(first[s], last[t], r, q)
    return VertexToEdgeCostArtifact(graph=graph, spec=spec, vertex_names=b.names,
                                    back_map=b.back, source_graph=g,
                                    path_first=first, path_last=last)


@dataclass
class EdgeToVertexCostArtifact(ReductionArtifact):
    source_graph: DirectedGraph
    vertex_cost: dict[int, int]

    def decode(self, edge_set: Iterable[Edge]) -> frozenset[Edge]:
        chosen = frozenset(edge_set)
        counts: dict[Edge, int] = {}
        for e in chosen:
            kind, payload = self.back_map[e]
            if kind == "edge":
                counts[payload] = counts.get(payload, 0) + 1
        q1 = self.spec.pairs[0][3] + 1
        return frozenset(e for e, c in counts.items() if c == q1)


def edge_costs_to_vertex_costs(g: DirectedGraph, s: int, t: int, r: int, q: int
                               ) -> EdgeToVertexCostArtifact:
    """Move costs from edges to vertices.

    Every edge becomes a path of q+1 edges; its first intermediate vertex
    carries the edge cost, everything else costs 0.  Each source step
    contributes q+1 = 1 mod q, preserving remainders.
    """
    if q < 1:
        raise ValidationError("q must be positive")
    if s not in g.vertices or t not in g.vertices:
        raise ValidationError("endpoints must be vertices of the graph")
    b = _Builder(g.vertex_count)
    vcost: dict[int, int] = {v: 0 for v in range(g.vertex_count)}
    for u, v in sorted(g.edges):
        prev = u
        for i in range(q):
            nxt = b.fresh(f"e{u}-{v}.{i + 1}")
            vcost[nxt] = g.edge_cost((u, v)) if i == 0 else 0
            b.add_edge((prev, nxt), ("edge", (u, v)))
            prev = nxt
        b.add_edge((prev, v), ("edge", (u, v)))
    graph = DirectedGraph(b.next_vertex, b.edges)
    spec = RequirementSpec.ewm(s, t, r, q)
    return EdgeToVertexCostArtifact(graph=graph, spec=spec, vertex_names=b.names,
                                    back_map=b.back, source_graph=g,
                                    vertex_cost=vcost)


def reduce_undirected_modulus(s: int, t: int, r: int, q: int
                              ) -> Optional[tuple[int, int]]:
    """Collapse an undirected modular requirement to modulus 1 or 2.

    Returns None when the walk can be dropped entirely (s = t with
    remainder 0: the empty walk suffices); otherwise a nonempty walk can
    zig-zag on any of its edges, adding arbitrary even amounts, so only
    the parity matters for even q and nothing matters for odd q.
    """
    if q < 1:
        raise ValidationError("q must be positive")
    if not 0 <= r < q:
        raise ValidationError(f"remainder {r} out of range 0..{q - 1}")
    if s == t and r == 0:
        return None
    if q % 2 == 0:
        return (r % 2, 2)
    return (0, 1)


@dataclass
class UndirectedToDirectedArtifact(ReductionArtifact):
    source_graph: UndirectedGraph
    path_edges: dict[tuple[int, int], tuple[Edge, ...]]
    gadget: dict[tuple[int, int], dict[str, int]]

    def decode(self, edge_set: Iterable[Edge]) -> frozenset[tuple[int, int]]:
        """Undirected edges whose full long path is present.

        Also checks the structural bound: at most 6m chosen edges are
        connectors (not part of any long path).
        """
        chosen = frozenset(edge_set)
        m = len(self.source_graph.edges)
        connectors = sum(1 for e in chosen if self.back_map[e][0] == "connector")
        if connectors > 6 * m:
            raise AssertionError("more connector edges than the gadget provides")
        out = set()
        for ue, path in self.path_edges.items():
            if all(e in chosen for e in path):
                out.add(ue)
        return frozenset(out)

    def encode_walk(self, vertex_seq: Sequence[int]) -> Walk:
        """Directed image of an undirected walk given as a vertex sequence."""
        steps: list[Edge] = []
        for a, bvert in zip(vertex_seq, vertex_seq[1:]):
            ue = (min(a, bvert), max(a, bvert))
            if ue not in self.gadget:
                raise ValidationError(f"{{{a}, {bvert}}} is not a source edge")
            gad = self.gadget[ue]
            path = self.path_edges[ue]
            u, v = ue
            if a == u:  # u-side entry, v-side exit
                steps.append((u, gad["w1"]))
                steps.extend(path)
                steps.append((gad["wlast"], gad["out"]))
                steps.append((gad["out"], v))
            else:  # v-side entry, u-side exit
                steps.append((v, gad["in"]))
                steps.append((gad["in"], gad["w1"]))
                steps.extend(path)
                steps.append((gad["wlast"], u))
        anchor = vertex_seq[0] if vertex_seq else None
        return Walk(self.graph, steps, anchor=anchor)


def undirected_to_directed(ug: UndirectedGraph, s: int, t: int, r: int, q: int
                           ) -> UndirectedToDirectedArtifact:
    """Encode an undirected parity instance into a directed one.

    Each undirected edge {u, v} becomes a long one-way path of 8m edges
    with cheap entry/exit connectors on both sides; crossing the gadget
    costs 8m+3 steps (odd), and any same-side round trip is even, so walk
    parities transfer exactly.  The modulus must already be reduced to 1
    or 2 via ``reduce_undirected_modulus``.
    """
    if q not in (1, 2):
        raise ValidationError("modulus must be reduced to 1 or 2 first")
    if not 0 <= r < q:
        raise ValidationError(f"remainder {r} out of range 0..{q - 1}")
    if not (0 <= s < ug.vertex_count and 0 <= t < ug.vertex_count):
        raise ValidationError("endpoints must be vertices of the graph")
    m = len(ug.edges)
    L = 8 * m
    b = _Builder(ug.vertex_count)
    path_edges: dict[tuple[int, int], tuple[Edge, ...]] = {}
    gadget: dict[tuple[int, int], dict[str, int]] = {}
    for u, v in sorted(ug.edges):
        name = f"g{u}-{v}"
        w = [b.fresh(f"{name}.w{i + 1}") for i in range(L + 1)]
        w_in = b.fresh(f"{name}.in")  # entry connector from v
        w_out = b.fresh(f"{name}.out")  # exit connector towards v
        path = []
        for i in range(L):
            e = (w[i], w[i + 1])
            b.add_edge(e, ("edge", (u, v)))
            path.append(e)
        for e in ((u, w[0]), (w[L], u), (v, w_in), (w_in, w[0]), (w[L], w_out), (w_out, v)):
            b.add_edge(e, ("connector", (u, v)))
        path_edges[(u, v)] = tuple(path)
        gadget[(u, v)] = {"w1": w[0], "wlast": w[L], "in": w_in, "out": w_out}
    graph = DirectedGraph(b.next_vertex, b.edges)
    spec = RequirementSpec.ewm(s, t, r, q)
    return UndirectedToDirectedArtifact(graph=graph, spec=spec, vertex_names=b.names,
                                        back_map=b.back, source_graph=ug,
                                        path_edges=path_edges, gadget=gadget)
