"""Shared fixtures: the two worked examples and random-instance generators.

``fig1`` is the 13-vertex instance whose edge-minimum odd s-t walk (cost
7, length 11) differs from its shortest odd s-t walk (length 9, 8 edges).
``fig2`` is the canonical 43-step walk on 24 vertices used by the
structural tests; its vertex ids here are the diagram's v1..v24 minus
one.  ``fig5`` is the small undirected instance whose only odd s-t
solution is the entire graph.
"""

from __future__ import annotations

import random

from modwalk.graph_core import DirectedGraph, UndirectedGraph, Walk

# fig1 vertex ids
F1_S, F1_A, F1_B, F1_C, F1_D, F1_E, F1_T = 0, 1, 2, 3, 4, 5, 6
F1_F, F1_G, F1_H, F1_I, F1_J, F1_K = 7, 8, 9, 10, 11, 12

FIG1_EDGES = [
    (F1_S, F1_A), (F1_A, F1_B), (F1_B, F1_C), (F1_C, F1_D), (F1_D, F1_E),
    (F1_E, F1_T), (F1_E, F1_A),
    (F1_S, F1_F), (F1_F, F1_G), (F1_G, F1_H), (F1_H, F1_I), (F1_I, F1_J),
    (F1_J, F1_K), (F1_K, F1_G), (F1_H, F1_T),
]


def fig1_graph() -> DirectedGraph:
    return DirectedGraph(13, FIG1_EDGES)


def fig1_top_cycle_walk(g: DirectedGraph) -> Walk:
    seq = [F1_S, F1_A, F1_B, F1_C, F1_D, F1_E, F1_A, F1_B, F1_C, F1_D, F1_E, F1_T]
    return Walk.from_vertex_sequence(g, seq)


# The 43-step reference walk, as a 1-based vertex id sequence.
FIG2_SEQUENCE_1BASED = [
    1, 2, 3, 2, 4, 5, 2, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 14,
    15, 18, 16, 17, 13, 12, 10, 11, 8, 9, 19, 6, 3, 2, 20, 21, 22, 23,
    22, 23, 21, 22, 23, 24,
]

FIG2_SEGMENT_RANGES = [(1, 3), (4, 6), (7, 19), (20, 22), (23, 38), (39, 41), (42, 43)]

# One-based expected vertex order produced by the chunk-by-chunk rules.
FIG2_ORDER_1BASED = [1, 2, 4, 5, 3, 6, 19, 7, 8, 9, 10, 11, 12, 13, 14,
                     15, 18, 16, 17, 20, 21, 22, 23, 24]


def fig2_walk() -> Walk:
    seq = [v - 1 for v in FIG2_SEQUENCE_1BASED]
    edges = set(zip(seq, seq[1:]))
    graph = DirectedGraph(24, sorted(edges))
    return Walk.from_vertex_sequence(graph, seq)


# fig5 vertex ids
F5_S, F5_A, F5_T, F5_B, F5_C = 0, 1, 2, 3, 4

FIG5_EDGES = [(F5_S, F5_A), (F5_A, F5_T), (F5_A, F5_B), (F5_B, F5_C), (F5_C, F5_A)]


def fig5_undirected() -> UndirectedGraph:
    return UndirectedGraph(5, FIG5_EDGES)


def random_graph(rng: random.Random, max_n: int, max_m: int,
                 self_loops: bool = True) -> DirectedGraph:
    n = rng.randint(2, max_n)
    pool = [(u, v) for u in range(n) for v in range(n) if self_loops or u != v]
    m = rng.randint(1, min(max_m, len(pool)))
    return DirectedGraph(n, sorted(rng.sample(pool, m)))


def random_ewm_instance(rng: random.Random, max_n: int = 6, max_m: int = 12,
                        qs=(2, 3, 4, 5)):
    g = random_graph(rng, max_n, max_m)
    q = rng.choice(qs)
    s = rng.randrange(g.vertex_count)
    t = rng.randrange(g.vertex_count)
    r = rng.randrange(q)
    return g, s, t, r, q


def random_dsnm_instance(rng: random.Random, max_n: int = 5, max_m: int = 10,
                         k: int = 2, qs=(2, 3)):
    g = random_graph(rng, max_n, max_m)
    pairs = []
    for _ in range(k):
        q = rng.choice(qs)
        pairs.append((rng.randrange(g.vertex_count), rng.randrange(g.vertex_count),
                      rng.randrange(q), q))
    return g, tuple(pairs)


def random_walk(rng: random.Random, max_n: int = 12, max_len: int = 40) -> Walk:
    """A random walk on a random graph where every vertex has out-degree >= 1."""
    n = rng.randint(2, max_n)
    edges = {(v, rng.randrange(n)) for v in range(n)}
    extra = rng.randint(0, 2 * n)
    for _ in range(extra):
        edges.add((rng.randrange(n), rng.randrange(n)))
    g = DirectedGraph(n, sorted(edges))
    length = rng.randint(1, max_len)
    seq = [rng.randrange(n)]
    for _ in range(length):
        seq.append(rng.choice(g.successors(seq[-1])))
    return Walk.from_vertex_sequence(g, seq)
