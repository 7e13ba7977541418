"""Structural analysis of walks: segments, chunks, and the cut-friendly order.

A walk decomposes greedily into *segments*: a segment ends at the first
position where some first-visited edge's source already had a path (in
the graph spanned so far) to the vertex the walk just reached.  Each
non-last segment carries a *detour* (the in-walk subwalk from that
first-visited edge to the segment end), a *shortcut* (the pre-existing
path with the same endpoints) and the remainder shift obtained by
swapping one for the other.

Independently, the first-visited edges split into *chunks* (maximal runs
of first-visited edges through first-visited intermediate vertices),
which drive the vertex order whose prefix cuts stay within three times
the segment count.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .graph_core import DirectedGraph, Edge, ValidationError, Walk, spanned_subgraph


@dataclass(frozen=True)
class Segment:
    """One segment ``w[start:end]`` (1-based, inclusive).

    The detour fields are None exactly for the last segment of a walk
    whose decomposition ends without a segment end.
    """

    start: int
    end: int
    detour_first_index: Optional[int] = None
    detour: Optional[Walk] = None
    shortcut: Optional[Walk] = None
    back_path: Optional[Walk] = None
    delta: Optional[int] = None

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class SegmentDecomposition:
    walk: Walk
    modulus: int
    segments: tuple[Segment, ...]

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    def ranges(self) -> list[tuple[int, int]]:
        return [s.range for s in self.segments]


class ChunkKind(enum.Enum):
    NORMAL = "normal"
    CYCLE = "cycle"
    TADPOLE = "tadpole"


@dataclass(frozen=True)
class Chunk:
    start: int
    end: int
    kind: ChunkKind

    @property
    def range(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class ChunkDecomposition:
    walk: Walk
    chunks: tuple[Chunk, ...]


@dataclass(frozen=True)
class Timestamp:
    """First-visited timestamp: distances from the walk's end, ascending."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.values, self.values[1:]):
            if a >= b:
                raise ValidationError("timestamp values must be strictly increasing")


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _reachable_from(g: DirectedGraph, source: int) -> set[int]:
    seen = {source}
    stack = [source]
    while stack:
        v = stack.pop()
        for u in g.successors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def segment_decomposition(w: Walk, q: int) -> SegmentDecomposition:
    """Greedy left-to-right segment decomposition of a non-empty walk.

    Ties are broken deterministically: for the minimal segment end ``k``
    the smallest admissible first-visited index ``j`` is used, and the
    shortcut is a shortest path (by edge count) in the graph spanned
    before step ``j``.
    """
    if len(w) == 0:
        raise ValidationError("cannot decompose an empty walk")
    if q < 1:
        raise ValidationError("q must be positive")

    first_visit = w.first_visited_edge_flags()
    segments: list[Segment] = []
    lam = 0  # total length of the segments produced so far
    n_steps = len(w)

    while lam < n_steps:
        end_found = None  # (k, j)
        # Candidate first-visited steps in (lam, k], with their source's
        # reachable set in the graph spanned strictly before them.
        candidates: list[tuple[int, int, set[int]]] = []
        for k in range(lam + 1, n_steps + 1):
            if first_visit[k - 1]:
                j = k
                u = w.step(j)[0]
                reach = _reachable_from(spanned_subgraph(w, j - 1), u)
                candidates.append((j, u, reach))
            y = w.step(k)[1]
            for j, _, reach in candidates:
                if y in reach:
                    end_found = (k, j)
                    break
            if end_found:
                break

        if end_found is None:
            segments.append(Segment(start=lam + 1, end=n_steps))
            break

        k, j = end_found
        u = w.step(j)[0]
        y = w.step(k)[1]
        detour = w.subwalk(j, k)
        before_j = spanned_subgraph(w, j - 1)
        shortcut = _shortest_path(before_j, u, y)
        back_path = _back_path(w, shortcut, j, u, y)
        delta = (len(detour) - len(shortcut)) % q
        segments.append(Segment(start=lam + 1, end=k, detour_first_index=j,
                                detour=detour, shortcut=shortcut,
                                back_path=back_path, delta=delta))
        lam = k

    return SegmentDecomposition(walk=w, modulus=q, segments=tuple(segments))


def _shortest_path(g: DirectedGraph, source: int, target: int) -> Walk:
    """Shortest source->target path in g (BFS, deterministic); empty if equal."""
    if source == target:
        return Walk(g, [], anchor=source)
    parent: dict[int, int] = {source: source}
    frontier = [source]
    while frontier and target not in parent:
        nxt = []
        for v in frontier:
            for u in g.successors(v):
                if u not in parent:
                    parent[u] = v
                    nxt.append(u)
        frontier = nxt
    if target not in parent:
        raise AssertionError("segment end without a witnessing path")
    path = [target]
    while path[-1] != source:
        path.append(parent[path[-1]])
    path.reverse()
    return Walk(g, list(zip(path, path[1:])))


def _back_path(w: Walk, shortcut: Walk, j: int, u: int, y: int) -> Walk:
    """The in-walk return path from y to u preceding step j.

    Runs from just after the last pre-``j`` occurrence of the shortcut's
    final edge up to step ``j - 1``; empty (anchored at u) when u == y.
    """
    if u == y:
        return Walk(w.graph, [], anchor=u)
    last_edge = shortcut.steps[-1]
    j_prime = None
    for i in range(j - 1, 0, -1):
        if w.step(i) == last_edge:
            j_prime = i
            break
    if j_prime is None:
        raise AssertionError("shortcut edge missing from the walk prefix")
    return w.subwalk(j_prime + 1, j - 1)


def achievable_difference(dec: SegmentDecomposition, sigma: int) -> int:
    """The remainder shift of segment ``sigma`` (1-based, not the last)."""
    if not 1 <= sigma <= dec.segment_count:
        raise ValidationError(f"segment index {sigma} out of range")
    seg = dec.segments[sigma - 1]
    if seg.delta is None:
        raise ValidationError(f"segment {sigma} has no detour (last segment)")
    return seg.delta


def achievable_subgroup(dec: SegmentDecomposition, sigma: int) -> frozenset[int]:
    """Subgroup of Z_q generated by the differences of segments 1..sigma.

    ``sigma = 0`` yields the trivial subgroup {0}.
    """
    if not 0 <= sigma < dec.segment_count:
        raise ValidationError(f"upper index {sigma} out of range 0..{dec.segment_count - 1}")
    q = dec.modulus
    g = q
    for seg in dec.segments[:sigma]:
        if seg.delta is not None:
            g = math.gcd(g, seg.delta)
    return frozenset(range(0, q, g)) if g else frozenset({0})


def timestamp(w: Walk) -> Timestamp:
    """First-visited timestamp ``(|w|-i_m, ..., |w|-i_1)``."""
    flags = w.first_visited_edge_flags()
    indices = [i + 1 for i, f in enumerate(flags) if f]
    return Timestamp(tuple(len(w) - i for i in reversed(indices)))


def timestamp_compare(a: Timestamp, b: Timestamp) -> Ordering:
    """Lexicographic comparison; requires equally many distinct edges."""
    if len(a.values) != len(b.values):
        raise ValidationError("timestamps of different lengths are incomparable")
    if a.values < b.values:
        return Ordering.LESS
    if a.values > b.values:
        return Ordering.GREATER
    return Ordering.EQUAL


def chunk_decomposition(w: Walk) -> ChunkDecomposition:
    """Maximal runs of first-visited edges through first-visited vertices.

    Gaps between chunks consist purely of revisited edges; chunks are
    classified as cycle (returns to its first vertex), tadpole (returns to
    one of its intermediate vertices), or normal (a simple path).
    """
    if len(w) == 0:
        raise ValidationError("cannot decompose an empty walk")
    edge_fv = w.first_visited_edge_flags()
    vertex_fv = w.first_visit_vertex_flags()  # indexed by vertex occurrence
    seq = w.vertex_sequence()

    chunks: list[Chunk] = []
    i = 1
    n = len(w)
    while i <= n:
        if not edge_fv[i - 1]:
            i += 1
            continue
        j = i
        # Extend while the next edge is first-visited and the vertex
        # occurrence between them is a first visit.
        while j + 1 <= n and edge_fv[j] and vertex_fv[j]:
            j += 1
        first = seq[i - 1]
        last = seq[j]
        intermediates = seq[i:j]
        if first == last:
            kind = ChunkKind.CYCLE
        elif j > i and last in intermediates:
            kind = ChunkKind.TADPOLE
        else:
            kind = ChunkKind.NORMAL
        chunks.append(Chunk(start=i, end=j, kind=kind))
        i = j + 1
    return ChunkDecomposition(walk=w, chunks=tuple(chunks))


def chunk_vertex_order(w: Walk) -> list[int]:
    """The chunk-by-chunk vertex order whose prefix cuts the walk bounds.

    Intermediate vertices of a tadpole (or of a final chunk ending on a
    fresh vertex) go to the end of the order; a cycle's intermediates go
    right after its attachment vertex; a normal chunk's intermediates are
    placed monotonically between its endpoints, just after the smaller
    endpoint.
    """
    if len(w) == 0:
        return [w.source]
    dec = chunk_decomposition(w)
    vertex_fv = w.first_visit_vertex_flags()
    seq = w.vertex_sequence()
    order: list[int] = [w.source]

    for chunk in dec.chunks:
        i, j = chunk.start, chunk.end
        first = seq[i - 1]
        last = seq[j]
        intermediates = seq[i:j]
        if chunk.kind is ChunkKind.TADPOLE:
            order.extend(intermediates)
        elif chunk.kind is ChunkKind.CYCLE:
            at = order.index(first)
            order[at + 1:at + 1] = intermediates
        elif vertex_fv[j]:
            # Normal chunk ending on a first-visited vertex: only
            # possible for the walk's final chunk.
            order.extend(intermediates)
            order.append(last)
        else:
            pu = order.index(first)
            pv = order.index(last)
            if pu < pv:
                order[pu + 1:pu + 1] = intermediates
            else:
                order[pv + 1:pv + 1] = list(reversed(intermediates))
    return order


def rewrite_detour(dec: SegmentDecomposition, sigma: int, copies: int) -> Walk:
    """Swap segment ``sigma``'s detour for its shortcut, then splice in
    ``q`` rounds of back-path + shortcut with ``copies`` of them replaced
    by the detour again.

    The result is a valid walk on a subset of the original edges whose
    length is ``|w| + (copies - 1) * delta`` mod q; it exercises the
    length arithmetic of detour swapping without any minimality claim.
    """
    q = dec.modulus
    if not 0 <= copies <= q:
        raise ValidationError(f"copies must lie in 0..{q}")
    seg = dec.segments[sigma - 1] if 1 <= sigma <= dec.segment_count else None
    if seg is None:
        raise ValidationError(f"segment index {sigma} out of range")
    if seg.detour is None or seg.shortcut is None or seg.back_path is None:
        raise ValidationError(f"segment {sigma} has no detour (last segment)")

    w = dec.walk
    j = seg.detour_first_index
    k = seg.end
    steps: list[Edge] = list(w.steps[:j - 1])
    steps.extend(seg.shortcut.steps)
    for c in range(q):
        steps.extend(seg.back_path.steps)
        if c < copies:
            steps.extend(seg.detour.steps)
        else:
            steps.extend(seg.shortcut.steps)
    steps.extend(w.steps[k:])
    return Walk(w.graph, steps, anchor=w.source)
