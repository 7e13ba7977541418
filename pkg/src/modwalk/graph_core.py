"""Directed graphs, walks, SCC chains, and modular reachability.

Vertices are dense integer indices ``0..n-1``; everything else in the
package builds on the types here.  Graphs and walks are immutable after
construction and all operations are pure functions, so values can be
shared freely.

A graph may carry an explicit *active vertex set* (a subset of
``range(vertex_count)``).  This is how walk-spanned subgraphs are
represented: they keep the original vertex labels but only contain the
vertices actually touched by the walk, down to the degenerate
single-vertex graph spanned by an empty walk prefix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence

Edge = tuple[int, int]


class ValidationError(ValueError):
    """A precondition or type invariant was violated."""


class CapacityError(RuntimeError):
    """A hard desk-scale guard (vertex, edge, or state budget) was exceeded."""


class DirectedGraph:
    """Simple directed graph: no multi-edges, self-loops allowed.

    ``edges`` may be any iterable of ``(u, v)`` pairs; duplicates collapse
    (set semantics) but the first-seen order is kept in ``edge_list`` so
    that instance files round-trip deterministically.  ``cost`` and
    ``length`` are optional per-edge annotations; unannotated edges
    default to 1 (plain edge counting / unit length).
    """

    __slots__ = ("vertex_count", "edges", "edge_list", "vertices",
                 "cost", "length", "_succ", "_pred")

    def __init__(self, vertex_count: int, edges: Iterable[Edge], *,
                 vertices: Optional[Iterable[int]] = None,
                 cost: Optional[Mapping[Edge, int]] = None,
                 length: Optional[Mapping[Edge, int]] = None) -> None:
        if vertex_count < 0:
            raise ValidationError("vertex_count must be nonnegative")
        self.vertex_count = vertex_count

        seen: dict[Edge, None] = {}
        for e in edges:
            u, v = e
            seen.setdefault((int(u), int(v)), None)
        self.edge_list: tuple[Edge, ...] = tuple(seen)
        self.edges: frozenset[Edge] = frozenset(self.edge_list)

        if vertices is None:
            self.vertices: frozenset[int] = frozenset(range(vertex_count))
        else:
            self.vertices = frozenset(int(v) for v in vertices)
            for v in self.vertices:
                if not 0 <= v < vertex_count:
                    raise ValidationError(f"vertex {v} out of range 0..{vertex_count - 1}")
        for u, v in self.edge_list:
            if u not in self.vertices or v not in self.vertices:
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside the vertex set")

        self.cost = dict(cost) if cost is not None else None
        self.length = dict(length) if length is not None else None
        for name, ann in (("cost", self.cost), ("length", self.length)):
            if ann is None:
                continue
            for e, value in ann.items():
                if e not in self.edges:
                    raise ValidationError(f"{name} annotation on non-edge {e}")
                if value < 0:
                    raise ValidationError(f"negative {name} on edge {e}")

        succ: dict[int, list[int]] = {v: [] for v in self.vertices}
        pred: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edge_list:
            succ[u].append(v)
            pred[v].append(u)
        self._succ = {v: tuple(sorted(ts)) for v, ts in succ.items()}
        self._pred = {v: tuple(sorted(ts)) for v, ts in pred.items()}

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def successors(self, u: int) -> tuple[int, ...]:
        return self._succ[u]

    def predecessors(self, u: int) -> tuple[int, ...]:
        return self._pred[u]

    def edge_cost(self, e: Edge) -> int:
        if self.cost is None:
            return 1
        return self.cost.get(e, 1)

    def edge_length(self, e: Edge) -> int:
        if self.length is None:
            return 1
        return self.length.get(e, 1)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def with_edges(self, edges: Iterable[Edge]) -> "DirectedGraph":
        """Subgraph on the same vertex set keeping only ``edges``."""
        keep = frozenset(edges)
        extra = keep - self.edges
        if extra:
            raise ValidationError(f"edges {sorted(extra)} are not edges of the graph")
        cost = {e: c for e, c in self.cost.items() if e in keep} if self.cost else None
        length = {e: d for e, d in self.length.items() if e in keep} if self.length else None
        return DirectedGraph(self.vertex_count, [e for e in self.edge_list if e in keep],
                             vertices=self.vertices, cost=cost, length=length)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"DirectedGraph(n={self.vertex_count}, "
                f"|V|={len(self.vertices)}, m={len(self.edges)})")


class Walk:
    """A walk: a sequence of edge occurrences with matching endpoints.

    Empty walks are allowed and carry an explicit ``anchor`` vertex, so
    that source and target are always defined.  Steps are exposed with
    1-based indexing (``step(1)`` .. ``step(len(w))``) and subwalks use
    the inclusive slicing convention ``w[i:j]``, empty when ``j < i``.
    """

    __slots__ = ("graph", "steps", "anchor")

    def __init__(self, graph: DirectedGraph, steps: Sequence[Edge],
                 anchor: Optional[int] = None) -> None:
        self.graph = graph
        self.steps: tuple[Edge, ...] = tuple((int(u), int(v)) for u, v in steps)
        for e in self.steps:
            if e not in graph.edges:
                raise ValidationError(f"walk step {e} is not an edge of the graph")
        for (_, v1), (u2, _) in zip(self.steps, self.steps[1:]):
            if v1 != u2:
                raise ValidationError("consecutive walk steps do not share an endpoint")
        if not self.steps:
            if anchor is None:
                raise ValidationError("an empty walk needs an anchor vertex")
            if anchor not in graph.vertices:
                raise ValidationError(f"anchor vertex {anchor} not in graph")
            self.anchor: Optional[int] = int(anchor)
        else:
            self.anchor = None

    @classmethod
    def from_vertex_sequence(cls, graph: DirectedGraph, seq: Sequence[int]) -> "Walk":
        """Build a walk from ``v0 v1 ... vl``; consecutive pairs must be edges."""
        if not seq:
            raise ValidationError("vertex sequence must contain at least one vertex")
        if len(seq) == 1:
            return cls(graph, [], anchor=seq[0])
        return cls(graph, list(zip(seq, seq[1:])))

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def source(self) -> int:
        return self.anchor if not self.steps else self.steps[0][0]

    @property
    def target(self) -> int:
        return self.anchor if not self.steps else self.steps[-1][1]

    def step(self, i: int) -> Edge:
        """The i-th edge occurrence, 1-based."""
        if not 1 <= i <= len(self.steps):
            raise ValidationError(f"step index {i} out of range 1..{len(self.steps)}")
        return self.steps[i - 1]

    def subwalk(self, i: int, j: int) -> "Walk":
        """The subwalk ``w[i:j]`` (1-based, inclusive); empty when ``j < i``."""
        if j < i:
            if i - 1 >= 1:
                anchor = self.step(i - 1)[1]
            else:
                anchor = self.source
            return Walk(self.graph, [], anchor=anchor)
        return Walk(self.graph, self.steps[i - 1:j])

    def prefix(self, i: int) -> "Walk":
        """The prefix ``w[:i]``; empty (anchored at the source) when ``i <= 0``."""
        if i <= 0:
            return Walk(self.graph, [], anchor=self.source)
        return Walk(self.graph, self.steps[:i])

    def vertex_sequence(self) -> list[int]:
        """Vertex occurrences ``u0, u1, ..., ul`` along the walk."""
        if not self.steps:
            return [self.source]
        return [self.steps[0][0]] + [v for _, v in self.steps]

    @property
    def edges_used(self) -> frozenset[Edge]:
        return frozenset(self.steps)

    @property
    def vertices_used(self) -> frozenset[int]:
        return frozenset(self.vertex_sequence())

    def first_visited_edge_flags(self) -> list[bool]:
        """``flags[i-1]`` is True iff step i is the first occurrence of its edge."""
        seen: set[Edge] = set()
        flags = []
        for e in self.steps:
            flags.append(e not in seen)
            seen.add(e)
        return flags

    def first_visit_vertex_flags(self) -> list[bool]:
        """Occurrence-level first visits over ``vertex_sequence()``.

        ``flags[k]`` is True iff occurrence ``u_k`` is the first time its
        vertex appears; in particular ``flags[0]`` is always True and the
        target occurrence of a self-loop on the source is a revisit.
        """
        seen: set[int] = set()
        flags = []
        for v in self.vertex_sequence():
            flags.append(v not in seen)
            seen.add(v)
        return flags

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Walk({self.vertex_sequence()})"


@dataclass(frozen=True)
class SccChain:
    """SCCs of a graph in a topological order of the condensation.

    For graphs spanned by a walk prefix, the order is the unique linear
    reachability chain and the prefix target lies in the last component.
    """

    components: tuple[frozenset[int], ...]
    component_of: Mapping[int, int]

    def __len__(self) -> int:
        return len(self.components)


class UndirectedGraph:
    """Plain undirected graph; edges are stored as sorted pairs.

    Used as the source side of the undirected-to-directed reduction and
    by the undirected brute-force oracle.
    """

    __slots__ = ("vertex_count", "edge_list", "edges")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]]) -> None:
        if vertex_count < 0:
            raise ValidationError("vertex_count must be nonnegative")
        self.vertex_count = vertex_count
        norm = []
        seen = set()
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValidationError(f"edge ({u}, {v}) out of range")
            e = (min(u, v), max(u, v))
            if e not in seen:
                seen.add(e)
                norm.append(e)
        self.edge_list: tuple[tuple[int, int], ...] = tuple(norm)
        self.edges: frozenset[tuple[int, int]] = frozenset(norm)

    def bidirected(self, edge_subset: Optional[Iterable[tuple[int, int]]] = None) -> DirectedGraph:
        """Directed view with both orientations of each (chosen) edge."""
        chosen = self.edges if edge_subset is None else frozenset(edge_subset)
        arcs = set()
        for u, v in chosen:
            arcs.add((u, v))
            arcs.add((v, u))
        return DirectedGraph(self.vertex_count, sorted(arcs))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"UndirectedGraph(n={self.vertex_count}, m={len(self.edges)})"


def spanned_subgraph(w: Walk, prefix_len: int) -> DirectedGraph:
    """The graph spanned by ``w[:prefix_len]``: its vertices plus the source.

    ``prefix_len = 0`` yields the single-vertex graph on the walk's source
    with no edges.
    """
    if not 0 <= prefix_len <= len(w):
        raise ValidationError(f"prefix length {prefix_len} out of range 0..{len(w)}")
    steps = w.steps[:prefix_len]
    verts = {w.source}
    for u, v in steps:
        verts.add(u)
        verts.add(v)
    return DirectedGraph(w.graph.vertex_count, steps, vertices=verts)


def scc_chain(g: DirectedGraph) -> SccChain:
    """Strongly connected components, in a topological order of the condensation."""
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    onstack: set[int] = set()
    stack: list[int] = []
    sccs: list[frozenset[int]] = []
    counter = 0

    for root in sorted(g.vertices):
        if root in index:
            continue
        # Iterative Tarjan: (vertex, iterator over successors).
        work = [(root, iter(g.successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for u in it:
                if u not in index:
                    index[u] = lowlink[u] = counter
                    counter += 1
                    stack.append(u)
                    onstack.add(u)
                    work.append((u, iter(g.successors(u))))
                    advanced = True
                    break
                if u in onstack:
                    lowlink[v] = min(lowlink[v], index[u])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    onstack.remove(u)
                    comp.append(u)
                    if u == v:
                        break
                sccs.append(frozenset(comp))

    sccs.reverse()  # Tarjan emits components in reverse topological order.
    component_of = {v: i for i, comp in enumerate(sccs) for v in comp}
    return SccChain(tuple(sccs), component_of)


def modular_reachability(g: DirectedGraph, source: int, q: int) -> dict[int, set[int]]:
    """For each vertex, the set of walk lengths mod q achievable from ``source``.

    Plain BFS over the product graph on ``vertices x {0..q-1}``; the empty
    walk puts 0 in the source's own set.
    """
    if q < 1:
        raise ValidationError("q must be positive")
    if source not in g.vertices:
        raise ValidationError(f"source {source} not in graph")
    reached: dict[int, set[int]] = {v: set() for v in g.vertices}
    reached[source].add(0)
    queue = deque([(source, 0)])
    while queue:
        v, r = queue.popleft()
        r2 = (r + 1) % q
        for u in g.successors(v):
            if r2 not in reached[u]:
                reached[u].add(r2)
                queue.append((u, r2))
    return reached


def shortest_modular_walk(g: DirectedGraph, s: int, t: int, r: int, q: int) -> Optional[Walk]:
    """A shortest s->t walk of length r mod q, or None if none exists.

    BFS over the same product graph; any returned walk is shorter than
    ``|vertices| * q`` (one step per product state at most).
    """
    if q < 1:
        raise ValidationError("q must be positive")
    if not 0 <= r < q:
        raise ValidationError(f"remainder {r} out of range 0..{q - 1}")
    if s not in g.vertices or t not in g.vertices:
        raise ValidationError("endpoints must be vertices of the graph")
    start = (s, 0)
    goal = (t, r % q)
    parent: dict[tuple[int, int], tuple[int, int]] = {start: start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            break
        v, rr = state
        r2 = (rr + 1) % q
        for u in g.successors(v):
            nxt = (u, r2)
            if nxt not in parent:
                parent[nxt] = state
                queue.append(nxt)
    if goal not in parent:
        return None
    states = [goal]
    while states[-1] != start:
        states.append(parent[states[-1]])
    states.reverse()
    steps = [(a[0], b[0]) for a, b in zip(states, states[1:])]
    return Walk(g, steps, anchor=s)


def _undirected_edges(g: DirectedGraph) -> set[frozenset[int]]:
    return {frozenset((u, v)) for u, v in g.edges if u != v}


def cutwidth_of_order(g: DirectedGraph, order: Sequence[int]) -> int:
    """Maximum number of underlying-undirected edges crossing a prefix cut.

    Self-loops never cross; an antiparallel pair (u,v),(v,u) counts once.
    """
    order = list(order)
    if sorted(order) != sorted(g.vertices):
        raise ValidationError("order is not a permutation of the graph's vertices")
    n = len(order)
    if n <= 1:
        return 0
    pos = {v: i for i, v in enumerate(order)}
    # diff[c] accumulates edge spans over the cuts after prefix c (1-based).
    diff = [0] * (n + 1)
    for uv in _undirected_edges(g):
        u, v = tuple(uv)
        lo, hi = sorted((pos[u], pos[v]))
        diff[lo + 1] += 1
        diff[hi + 1] -= 1
    best = 0
    running = 0
    for c in range(1, n):
        running += diff[c]
        best = max(best, running)
    return best


_EXACT_CUTWIDTH_MAX_VERTICES = 10


def exact_cutwidth_order(g: DirectedGraph) -> tuple[int, list[int]]:
    """Exact cutwidth and a witnessing vertex order (subset DP).

    Guarded at 10 vertices: the DP walks all vertex subsets.
    """
    verts = sorted(g.vertices)
    n = len(verts)
    if n > _EXACT_CUTWIDTH_MAX_VERTICES:
        raise CapacityError(f"exact cutwidth limited to {_EXACT_CUTWIDTH_MAX_VERTICES} vertices, got {n}")
    if n <= 1:
        return 0, verts
    vid = {v: i for i, v in enumerate(verts)}
    nbr = [0] * n  # undirected neighbour bitmasks
    for uv in _undirected_edges(g):
        u, v = tuple(uv)
        nbr[vid[u]] |= 1 << vid[v]
        nbr[vid[v]] |= 1 << vid[u]

    full = (1 << n) - 1
    # cross[mask]: edges with exactly one endpoint in mask.
    cross = [0] * (full + 1)
    for mask in range(1, full + 1):
        low = mask & -mask
        i = low.bit_length() - 1
        prev = mask ^ low
        inside = bin(nbr[i] & prev).count("1")
        outside = bin(nbr[i] & ~mask & full).count("1")
        cross[mask] = cross[prev] - inside + outside

    best = [0] * (full + 1)
    choice = [0] * (full + 1)
    for mask in range(1, full + 1):
        m = mask
        val = None
        pick = -1
        while m:
            low = m & -m
            m ^= low
            prev = mask ^ low
            cand = max(best[prev], cross[prev])
            if val is None or cand < val:
                val = cand
                pick = low.bit_length() - 1
        best[mask] = val if val is not None else 0
        choice[mask] = pick

    order_ids: list[int] = []
    mask = full
    while mask:
        i = choice[mask]
        order_ids.append(i)
        mask ^= 1 << i
    order_ids.reverse()
    return best[full], [verts[i] for i in order_ids]


def exact_cutwidth(g: DirectedGraph) -> int:
    """Minimum of ``cutwidth_of_order`` over all vertex orders (guard: 10 vertices)."""
    return exact_cutwidth_order(g)[0]
