"""Exact solver: best-first search over the configuration graph.

A *configuration* is a bounded set of vertices plus, for every ordered
pair, the set of walk-length remainders (mod q) realizable between them
using the edges paid for so far.  Transitions either *introduce* a new
vertex together with any subset of its edges into the current domain
(paying for the picked edges) or *forget* a vertex for free.  The
minimum-cost path from the empty configuration to one that witnesses all
required remainders yields an edge-minimum subgraph; witness walks are
then re-extracted from that subgraph by plain product-graph search.

The search is uniform-cost (Dijkstra) over lazily generated neighbours.
Since forgets are free and an edgeless vertex introduction only adds an
empty row, both can be deferred without losing any information: every
path through the configuration graph has an equal-cost twin in which the
required terminals enter the domain first and stay, every other vertex
enters together with the first transition that pays for one of its
edges, and vertices are forgotten only when the domain bound forces it.
The search explores exactly this canonical family (the completeness
construction already has this shape), which keeps the reachable state
space desk-sized; transitions whose accumulated cost exceeds a cheap
feasible candidate (the union of one full-graph witness walk per
requirement) are pruned as well.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph_core import (CapacityError, DirectedGraph, Edge, ValidationError,
                         Walk, modular_reachability, shortest_modular_walk)


class BudgetExceededError(CapacityError):
    """The search exceeded its configured node budget."""


class OmegaTooSmallError(CapacityError):
    """The domain bound admitted no final configuration although the
    instance itself is feasible; raise omega."""


def ceil_log2(q: int) -> int:
    if q < 1:
        raise ValidationError("q must be positive")
    return (q - 1).bit_length()


@dataclass(frozen=True)
class RequirementSpec:
    """k connection requirements ``(s_i, t_i, r_i, q_i)``; k = 1 is plain
    edge-minimum walk search."""

    pairs: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValidationError("a requirement spec needs at least one pair")
        for s, t, r, q in self.pairs:
            if q < 1:
                raise ValidationError("moduli must be positive")
            if not 0 <= r < q:
                raise ValidationError(f"remainder {r} out of range 0..{q - 1}")

    @classmethod
    def ewm(cls, s: int, t: int, r: int, q: int) -> "RequirementSpec":
        return cls(((s, t, r, q),))

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def q(self) -> int:
        """Least common multiple of the per-pair moduli."""
        return math.lcm(*(q for _, _, _, q in self.pairs))

    @property
    def terminals(self) -> frozenset[int]:
        return frozenset(v for s, t, _, _ in self.pairs for v in (s, t))


@dataclass(frozen=True)
class SolverParams:
    omega: int
    cost_mode: str = "edge-count"
    node_budget: int = 10_000_000

    def __post_init__(self) -> None:
        if self.cost_mode not in ("edge-count", "edge-costs"):
            raise ValidationError(f"unknown cost mode {self.cost_mode!r}")
        if self.omega < 1:
            raise ValidationError("omega must be positive")


@dataclass(frozen=True)
class Configuration:
    """Search state: sorted vertex domain plus remainder-set bit rows.

    ``rho[i * len(domain) + j]`` is the bitmask (over q bits) of
    remainders for the ordered pair ``(domain[i], domain[j])``.  Stored
    configurations are closed under internal-walk concatenation; the
    transition functions below maintain that invariant.
    """

    domain: tuple[int, ...]
    rho: tuple[int, ...]

    @classmethod
    def empty(cls) -> "Configuration":
        return cls((), ())

    def index_of(self, v: int) -> int:
        try:
            return self.domain.index(v)
        except ValueError:
            raise ValidationError(f"vertex {v} not in configuration domain") from None

    def remainders(self, u: int, v: int) -> frozenset[int]:
        d = len(self.domain)
        mask = self.rho[self.index_of(u) * d + self.index_of(v)]
        return frozenset(r for r in range(mask.bit_length()) if mask >> r & 1)


_CONV_TABLE_MAX_Q = 8
_conv_cache: dict[int, list[list[int]]] = {}
_star_cache: dict[int, list[int]] = {}


def _conv_table(q: int) -> list[list[int]]:
    """table[a][b] = bitmask of { (x + y) mod q : x in a, y in b }."""
    table = _conv_cache.get(q)
    if table is None:
        size = 1 << q
        full = size - 1
        rot = [[0] * q for _ in range(size)]
        for a in range(size):
            for y in range(q):
                rot[a][y] = ((a << y) | (a >> (q - y))) & full if y else a
        table = [[0] * size for _ in range(size)]
        for a in range(1, size):
            rot_a = rot[a]
            row = table[a]
            for b in range(1, size):
                acc = 0
                bb = b
                while bb:
                    low = bb & -bb
                    acc |= rot_a[low.bit_length() - 1]
                    bb ^= low
                row[b] = acc
        _conv_cache[q] = table
    return table


def _subgroup_mask(elements: int, q: int) -> int:
    """Bitmask of all finite sums (incl. the empty sum 0) of ``elements``."""
    g = q
    aa = elements
    while aa:
        low = aa & -aa
        g = math.gcd(g, low.bit_length() - 1)
        aa ^= low
    mask = 0
    for r in range(0, q, g):
        mask |= 1 << r
    return mask | 1


def _star_table(q: int) -> list[int]:
    table = _star_cache.get(q)
    if table is None:
        table = [_subgroup_mask(a, q) for a in range(1 << q)]
        _star_cache[q] = table
    return table


def _conv_masks_slow(a: int, b: int, q: int) -> int:
    acc = 0
    aa = a
    while aa:
        la = aa & -aa
        x = la.bit_length() - 1
        aa ^= la
        bb = b
        while bb:
            lb = bb & -bb
            acc |= 1 << ((x + lb.bit_length() - 1) % q)
            bb ^= lb
    return acc


def _close_masks(masks: list[int], d: int, q: int) -> None:
    """Kleene closure in place: saturate all internal-walk sums.

    This implements the product construction's transitive closure:
    eliminating domain positions one by one, with self-loop remainder
    sets expanded to the subgroup they generate.
    """
    if q <= _CONV_TABLE_MAX_Q:
        conv = _conv_table(q)
        star = _star_table(q)
        mul = lambda a, b: conv[a][b]  # noqa: E731
        st = lambda a: star[a]  # noqa: E731
    else:  # big moduli: same algebra without the precomputed tables
        mul = lambda a, b: _conv_masks_slow(a, b, q)  # noqa: E731
        st = lambda a: _subgroup_mask(a, q)  # noqa: E731

    for k in range(d):
        kd = k * d
        loop = st(masks[kd + k])
        for i in range(d):
            a = masks[i * d + k]
            if not a:
                continue
            a = mul(a, loop)
            row_i = i * d
            for j in range(d):
                b = masks[kd + j]
                if b:
                    masks[row_i + j] |= mul(a, b)
    for i in range(d):
        masks[i * d + i] |= 1


def closure(c: Configuration, q: int) -> Configuration:
    """Saturate the remainder sets under internal-walk concatenation.

    Every vertex reaches itself with remainder 0 via the empty walk.
    Idempotent and extensive: ``closure(closure(c)) == closure(c) >= c``.
    """
    d = len(c.domain)
    masks = list(c.rho)
    _close_masks(masks, d, q)
    return Configuration(c.domain, tuple(masks))


def is_closed(c: Configuration, q: int) -> bool:
    return closure(c, q) == c


def incident_edges(g: DirectedGraph, v: int, domain: Iterable[int]) -> list[Edge]:
    """Edges of g touching v whose other endpoint lies in ``domain | {v}``
    (the self-loop on v included), sorted."""
    dom = set(domain)
    dom.add(v)
    out = set()
    for u in g.successors(v):
        if u in dom:
            out.add((v, u))
    for u in g.predecessors(v):
        if u in dom:
            out.add((u, v))
    return sorted(out)


def introduce(c: Configuration, v: int, picked: Iterable[Edge], g: DirectedGraph,
              q: int, omega: int, *, use_costs: bool = False) -> tuple[Configuration, int]:
    """Add vertex v and pay for ``picked`` incident edges.

    Returns the closed successor configuration and the transition cost
    (number of picked edges, or their total cost when ``use_costs``).
    """
    if v in c.domain:
        raise ValidationError(f"vertex {v} already in the domain")
    if v not in g.vertices:
        raise ValidationError(f"vertex {v} not in the graph")
    if len(c.domain) >= omega:
        raise ValidationError(f"domain already holds omega = {omega} vertices")
    picked = sorted(set(picked))
    allowed = set(incident_edges(g, v, c.domain))
    for e in picked:
        if e not in allowed:
            raise ValidationError(f"edge {e} is not incident to {v} within the new domain")

    domain = tuple(sorted(c.domain + (v,)))
    d = len(domain)
    old_index = {u: i for i, u in enumerate(c.domain)}
    pos = {u: i for i, u in enumerate(domain)}
    masks = [0] * (d * d)
    od = len(c.domain)
    for a in c.domain:
        row_old = old_index[a] * od
        row_new = pos[a] * d
        for b in c.domain:
            masks[row_new + pos[b]] = c.rho[row_old + old_index[b]]
    one = 1 << (1 % q)
    for a, b in picked:
        masks[pos[a] * d + pos[b]] |= one

    if picked:
        _close_masks(masks, d, q)
    else:
        # No new remainders: the old part is closed already and the fresh
        # vertex only carries its empty self-walk.
        masks[pos[v] * d + pos[v]] |= 1
    cost = sum(g.edge_cost(e) for e in picked) if use_costs else len(picked)
    return Configuration(domain, tuple(masks)), cost


def forget(c: Configuration, v: int) -> Configuration:
    """Drop v from the domain, restricting the remainder rows (cost 0).

    Restriction of a closed configuration stays closed: internal walks of
    the restriction are internal walks of the original.
    """
    if v not in c.domain:
        raise ValidationError(f"vertex {v} not in the domain")
    keep = [u for u in c.domain if u != v]
    d_old = len(c.domain)
    old_index = {u: i for i, u in enumerate(c.domain)}
    d = len(keep)
    masks = [0] * (d * d)
    for i, a in enumerate(keep):
        row_old = old_index[a] * d_old
        row_new = i * d
        for j, b in enumerate(keep):
            masks[row_new + j] = c.rho[row_old + old_index[b]]
    return Configuration(tuple(keep), tuple(masks))


def is_final(c: Configuration, spec: RequirementSpec) -> bool:
    """True iff every pair's endpoints are present and some tracked
    remainder is congruent to the required one modulo the pair's q_i."""
    q = spec.q
    d = len(c.domain)
    pos = {u: i for i, u in enumerate(c.domain)}
    for s, t, r, qi in spec.pairs:
        if s not in pos or t not in pos:
            return False
        mask = c.rho[pos[s] * d + pos[t]]
        if not any(mask >> rp & 1 for rp in range(r, q, qi)):
            return False
    return True


def default_omega(spec: RequirementSpec) -> int:
    """Domain size bound: 6 + 3*ceil(log2 q) for a single pair, and
    (2k+1) + 12k + 3*ceil(log2 q) for k > 1 (tunable upward)."""
    q = spec.q
    k = spec.k
    if k == 1:
        return 6 + 3 * ceil_log2(q)
    return (2 * k + 1) + 12 * k + 3 * ceil_log2(q)


@dataclass(frozen=True)
class Solution:
    edge_set: frozenset[Edge]
    cost: int
    witnesses: tuple[Walk, ...]


@dataclass
class SolveStats:
    expanded_states: int = 0
    pushed: int = 0
    omega_used: int = 0
    wall_ms: float = 0.0


def extract_witnesses(edge_set: Iterable[Edge], spec: RequirementSpec,
                      g: DirectedGraph) -> list[Walk]:
    """One shortest witness walk per requirement, inside ``edge_set``."""
    sub = g.with_edges(edge_set)
    walks = []
    for s, t, r, qi in spec.pairs:
        w = shortest_modular_walk(sub, s, t, r, qi)
        if w is None:
            raise ValidationError(
                f"edge set does not contain an {s}->{t} walk of length {r} mod {qi}")
        walks.append(w)
    return walks


def _seed_configuration(terminals: list[int]) -> Configuration:
    """Closed configuration holding the terminals with no edges paid."""
    d = len(terminals)
    masks = [0] * (d * d)
    for i in range(d):
        masks[i * d + i] = 1
    return Configuration(tuple(terminals), tuple(masks))


def _upper_bound(g: DirectedGraph, spec: RequirementSpec, use_costs: bool) -> int:
    """Cost of the candidate made of one full-graph witness walk per pair."""
    edges: set[Edge] = set()
    for s, t, r, qi in spec.pairs:
        w = shortest_modular_walk(g, s, t, r, qi)
        assert w is not None  # feasibility was pre-checked
        edges |= w.edges_used
    if use_costs:
        return sum(g.edge_cost(e) for e in edges)
    return len(edges)


def solve_with_stats(g: DirectedGraph, spec: RequirementSpec,
                     params: Optional[SolverParams] = None
                     ) -> tuple[Optional[Solution], SolveStats]:
    """Uniform-cost search over configurations; None when infeasible."""
    t0 = time.perf_counter()
    if params is None:
        params = SolverParams(omega=default_omega(spec))
    stats = SolveStats(omega_used=params.omega)
    if params.omega < 2 * spec.k + 1:
        raise ValidationError(
            f"omega must be at least 2k+1 = {2 * spec.k + 1} to hold all terminals")
    for s, t, _, _ in spec.pairs:
        if s not in g.vertices or t not in g.vertices:
            raise ValidationError(f"requirement endpoints ({s}, {t}) not in the graph")
    use_costs = params.cost_mode == "edge-costs"

    # Feasibility pre-check on the whole graph.
    for s, t, r, qi in spec.pairs:
        if r not in modular_reachability(g, s, qi)[t]:
            stats.wall_ms = (time.perf_counter() - t0) * 1000
            return None, stats

    q = spec.q
    omega = params.omega
    bound = _upper_bound(g, spec, use_costs)
    vertices = sorted(g.vertices)
    terminals = sorted(spec.terminals)
    # All edges touching v, not restricted to the current domain: missing
    # endpoints are introduced (edgeless, free) within the same transition.
    all_incident: dict[int, list[Edge]] = {
        v: sorted({e for e in g.edges if v in e}) for v in vertices}

    start = _seed_configuration(terminals)
    dist: dict[Configuration, int] = {start: 0}
    parent: dict[Configuration, Optional[tuple[Configuration, tuple[Edge, ...]]]] = {start: None}
    counter = itertools.count()
    # Heap entries are settled states ("state", cfg, None) or transition
    # stubs ("intro", src, (forgets, v, picked)); stubs are materialized
    # (restricted, extended, closed) only when they pop.
    heap: list = [(0, next(counter), "state", start, None)]
    final_cfg: Optional[Configuration] = None

    while heap:
        d, _, kind, payload, stub = heapq.heappop(heap)
        if d > bound:
            break
        if kind == "state":
            cfg = payload
            if d > dist.get(cfg, -1):
                continue  # stale entry
            if is_final(cfg, spec):
                final_cfg = cfg
                break
            stats.expanded_states += 1
            if stats.expanded_states > params.node_budget:
                raise BudgetExceededError(
                    f"state budget of {params.node_budget} expanded configurations exceeded")
            dom_set = set(cfg.domain)
            for v in vertices:
                if v in dom_set:
                    continue
                inc = all_incident[v]
                for size in range(1, len(inc) + 1):
                    for picked in itertools.combinations(inc, size):
                        cost = (sum(g.edge_cost(e) for e in picked)
                                if use_costs else size)
                        nd = d + cost
                        if nd > bound:
                            continue
                        fresh = {x for e in picked for x in e} - dom_set
                        fresh.add(v)
                        overflow = len(dom_set) + len(fresh) - omega
                        if overflow > 0:
                            keep = {x for e in picked for x in e} | set(terminals)
                            removable = sorted(dom_set - keep)
                            if overflow > len(removable):
                                continue  # cannot make room for this pick
                            forget_sets = itertools.combinations(removable, overflow)
                        else:
                            forget_sets = ((),)
                        for dropped in forget_sets:
                            heapq.heappush(
                                heap, (nd, next(counter), "intro", cfg, (dropped, v, picked)))
                            stats.pushed += 1
                            if stats.pushed > params.node_budget:
                                raise BudgetExceededError(
                                    f"frontier budget of {params.node_budget} exceeded")
        else:
            src = payload
            dropped, v, picked = stub
            base = src
            for x in dropped:
                base = forget(base, x)
            for x in sorted({y for e in picked for y in e} - set(base.domain) - {v}):
                base, _ = introduce(base, x, (), g, q, omega)
            cfg, _ = introduce(base, v, picked, g, q, omega, use_costs=use_costs)
            if dist.get(cfg, d + 1) <= d:
                continue
            dist[cfg] = d
            parent[cfg] = (src, picked)
            heapq.heappush(heap, (d, next(counter), "state", cfg, None))

    stats.wall_ms = (time.perf_counter() - t0) * 1000
    if final_cfg is None:
        raise OmegaTooSmallError(
            f"no final configuration reachable with omega = {omega}; "
            f"the instance is feasible, so a larger omega is required")

    edge_set: set[Edge] = set()
    node = final_cfg
    while parent[node] is not None:
        prev, picked = parent[node]
        edge_set.update(picked)
        node = prev
    total = dist[final_cfg]
    check = sum(g.edge_cost(e) for e in edge_set) if use_costs else len(edge_set)
    assert check == total, "shortest path paid for an edge twice"
    witnesses = tuple(extract_witnesses(edge_set, spec, g))
    solution = Solution(frozenset(edge_set), total, witnesses)
    stats.wall_ms = (time.perf_counter() - t0) * 1000
    return solution, stats


def solve(g: DirectedGraph, spec: RequirementSpec,
          params: Optional[SolverParams] = None) -> Optional[Solution]:
    """Edge-minimum subgraph admitting every required modular walk.

    Returns None when no candidate solution exists at all.  With the
    default domain bound the result is optimal; a user-supplied bound
    that is too small raises ``OmegaTooSmallError`` instead of silently
    conflating "unreachable under this bound" with "infeasible".
    """
    return solve_with_stats(g, spec, params)[0]
