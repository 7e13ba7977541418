"""Command-line front end: parse instances, solve, analyze, reduce, generate.

Instance grammar (line oriented, ``#`` starts a comment):

    <n> <m> directed|undirected
    <u> <v> [cost=<c>] [len=<d>]     (m lines, 0-based vertex ids)
    ewm <s> <t> <r> <q>
  or
    dsnm <k>
    <s_i> <t_i> <r_i> <q_i>          (k lines)

Results are printed as one JSON object per line (``--format human`` gives
a small text report instead).  Exit codes: 0 success, 2 parse/validation
error, 3 infeasible instance, 4 capacity or search-budget error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .graph_core import (CapacityError, DirectedGraph, UndirectedGraph,
                         ValidationError, Walk, cutwidth_of_order,
                         spanned_subgraph)
from .oracle import brute_force_dsnm
from .reductions import (edge_costs_to_vertex_costs, lengths_to_unit,
                         reduce_undirected_modulus, scss_to_ewm,
                         undirected_to_directed, vertex_costs_to_edge_costs)
from .solver import (RequirementSpec, SolverParams, default_omega,
                     solve_with_stats)
from .walk_analysis import chunk_decomposition, chunk_vertex_order, segment_decomposition

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_CAPACITY = 4


class ParseError(ValidationError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(message)
        self.line = line


@dataclass
class Instance:
    directed: bool
    graph: Optional[DirectedGraph]
    ugraph: Optional[UndirectedGraph]
    spec: RequirementSpec
    query_kind: str  # "ewm" or "dsnm"


def _meaningful_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def parse_instance(text: str) -> Instance:
    """Parse an instance file; raises ParseError with a line number."""
    lines = _meaningful_lines(text)
    if not lines:
        raise ParseError(1, "empty instance")
    pos = 0

    def take(what: str) -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ParseError(last, f"unexpected end of file, expected {what}")
        item = lines[pos]
        pos += 1
        return item

    no, header = take("header")
    parts = header.split()
    if len(parts) != 3 or parts[2] not in ("directed", "undirected"):
        raise ParseError(no, "header must be '<n> <m> directed|undirected'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(no, "vertex and edge counts must be integers") from None
    if n < 0 or m < 0:
        raise ParseError(no, "vertex and edge counts must be nonnegative")
    directed = parts[2] == "directed"

    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    cost: dict[tuple[int, int], int] = {}
    length: dict[tuple[int, int], int] = {}
    for _ in range(m):
        no, line = take("an edge line")
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(no, "edge line must start with '<u> <v>'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(no, "edge endpoints must be integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(no, f"edge ({u}, {v}) out of range 0..{n - 1}")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(no, f"duplicate edge ({u}, {v})")
        seen.add(key)
        edges.append((u, v))
        for extra in parts[2:]:
            if extra.startswith("cost="):
                field, store = "cost", cost
            elif extra.startswith("len="):
                field, store = "len", length
            else:
                raise ParseError(no, f"unknown edge annotation {extra!r}")
            if not directed:
                raise ParseError(no, "edge annotations require a directed instance")
            try:
                value = int(extra.split("=", 1)[1])
            except ValueError:
                raise ParseError(no, f"{field} must be an integer") from None
            if value < 0:
                raise ParseError(no, f"{field} must be nonnegative")
            store[(u, v)] = value

    no, query = take("a query line")
    parts = query.split()
    pairs: list[tuple[int, int, int, int]] = []
    if parts[0] == "ewm":
        kind = "ewm"
        if len(parts) != 5:
            raise ParseError(no, "ewm query must be 'ewm <s> <t> <r> <q>'")
        pairs.append(_parse_requirement(no, parts[1:], n))
    elif parts[0] == "dsnm":
        kind = "dsnm"
        if not directed:
            raise ParseError(no, "dsnm queries are only supported on directed instances")
        if len(parts) != 2:
            raise ParseError(no, "dsnm query must be 'dsnm <k>'")
        try:
            k = int(parts[1])
        except ValueError:
            raise ParseError(no, "k must be an integer") from None
        if k < 1:
            raise ParseError(no, "k must be positive")
        for _ in range(k):
            no2, line = take("a requirement line")
            rp = line.split()
            if len(rp) != 4:
                raise ParseError(no2, "requirement line must be '<s> <t> <r> <q>'")
            pairs.append(_parse_requirement(no2, rp, n))
    else:
        raise ParseError(no, f"unknown query {parts[0]!r}")
    if pos != len(lines):
        raise ParseError(lines[pos][0], "trailing content after the query block")

    spec = RequirementSpec(tuple(pairs))
    if directed:
        graph = DirectedGraph(n, edges, cost=cost or None, length=length or None)
        return Instance(True, graph, None, spec, kind)
    return Instance(False, None, UndirectedGraph(n, edges), spec, kind)


def _parse_requirement(no: int, parts: Sequence[str], n: int) -> tuple[int, int, int, int]:
    try:
        s, t, r, q = (int(x) for x in parts)
    except ValueError:
        raise ParseError(no, "requirement fields must be integers") from None
    if not (0 <= s < n and 0 <= t < n):
        raise ParseError(no, f"endpoints ({s}, {t}) out of range 0..{n - 1}")
    if q < 1:
        raise ParseError(no, "q must be positive")
    if not 0 <= r < q:
        raise ParseError(no, f"r must satisfy 0 <= r < q, got r={r}, q={q}")
    return (s, t, r, q)


def write_instance(inst: Instance, extra_comments: Sequence[str] = ()) -> str:
    """Serialize an instance; inverse of parse_instance modulo whitespace."""
    out = []
    for comment in extra_comments:
        out.append(f"# {comment}")
    if inst.directed:
        assert inst.graph is not None
        g = inst.graph
        out.append(f"{g.vertex_count} {len(g.edge_list)} directed")
        for u, v in g.edge_list:
            line = f"{u} {v}"
            if g.cost is not None and (u, v) in g.cost:
                line += f" cost={g.cost[(u, v)]}"
            if g.length is not None and (u, v) in g.length:
                line += f" len={g.length[(u, v)]}"
            out.append(line)
    else:
        assert inst.ugraph is not None
        ug = inst.ugraph
        out.append(f"{ug.vertex_count} {len(ug.edge_list)} undirected")
        for u, v in ug.edge_list:
            out.append(f"{u} {v}")
    if inst.query_kind == "ewm":
        s, t, r, q = inst.spec.pairs[0]
        out.append(f"ewm {s} {t} {r} {q}")
    else:
        out.append(f"dsnm {inst.spec.k}")
        for s, t, r, q in inst.spec.pairs:
            out.append(f"{s} {t} {r} {q}")
    return "\n".join(out) + "\n"


def _emit(obj: dict, fmt: str) -> None:
    if fmt == "json-lines":
        print(json.dumps(obj, sort_keys=True))
    else:
        for key, value in sorted(obj.items()):
            print(f"{key}: {value}")


def _error_exit(kind: str, message: str, fmt: str, code: int, line: Optional[int] = None) -> int:
    obj = {"status": "error", "kind": kind, "message": message}
    if line is not None:
        obj["line"] = line
    _emit(obj, fmt)
    return code


def _load(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def cmd_solve(args: argparse.Namespace) -> int:
    inst = parse_instance(_load(args.instance))
    if not inst.directed:
        raise ValidationError("solve expects a directed instance; run 'reduce --reduction undirected' first")
    omega = args.omega if args.omega is not None else default_omega(inst.spec)
    mode = "edge-costs" if args.cost_mode == "weights" else "edge-count"
    params = SolverParams(omega=omega, cost_mode=mode, node_budget=args.budget)
    solution, stats = solve_with_stats(inst.graph, inst.spec, params)
    stats_obj = {"expanded_states": stats.expanded_states,
                 "omega_used": stats.omega_used,
                 "wall_ms": round(stats.wall_ms, 3)}
    if solution is None:
        _emit({"status": "infeasible", "stats": stats_obj}, args.format)
        return EXIT_INFEASIBLE
    _emit({"status": "ok",
           "cost": solution.cost,
           "edges": [list(e) for e in sorted(solution.edge_set)],
           "witnesses": [w.vertex_sequence() for w in solution.witnesses],
           "stats": stats_obj}, args.format)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = parse_instance(_load(args.instance))
    if not inst.directed:
        raise ValidationError("oracle expects a directed instance")
    use_costs = args.cost_mode == "weights"
    result = brute_force_dsnm(inst.graph, inst.spec, use_costs=use_costs)
    if result is None:
        _emit({"status": "infeasible"}, args.format)
        return EXIT_INFEASIBLE
    cost, edges = result
    _emit({"status": "ok", "cost": cost,
           "edges": [list(e) for e in sorted(edges)]}, args.format)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    inst = parse_instance(_load(args.instance))
    if not inst.directed:
        raise ValidationError("analyze expects a directed instance")
    if args.walk is not None:
        tokens = args.walk.split()
    elif args.walk_file is not None:
        tokens = _load(args.walk_file).split()
    else:
        raise ValidationError("provide the walk via --walk or --walk-file")
    try:
        seq = [int(t) for t in tokens]
    except ValueError:
        raise ValidationError("walk must be a whitespace-separated vertex sequence") from None
    walk = Walk.from_vertex_sequence(inst.graph, seq)
    if len(walk) == 0:
        raise ValidationError("analysis needs a walk with at least one step")
    q = args.modulus if args.modulus is not None else inst.spec.q
    seg = segment_decomposition(walk, q)
    chunks = chunk_decomposition(walk)
    order = chunk_vertex_order(walk)
    spanned = spanned_subgraph(walk, len(walk))
    cw = cutwidth_of_order(spanned, order)
    _emit({"segments": [list(s.range) for s in seg.segments],
           "chunks": [{"range": list(c.range), "kind": c.kind.value} for c in chunks.chunks],
           "ordering": order,
           "cutwidth_of_ordering": cw,
           "three_xi_bound": 3 * seg.segment_count}, args.format)
    return EXIT_OK


def _parse_terminals(raw: str) -> list[int]:
    try:
        return [int(x) for x in raw.replace(",", " ").split()]
    except ValueError:
        raise ValidationError("terminals must be a comma- or space-separated list of vertices") from None


def _parse_vertex_costs(raw: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            v, c = item.split(":")
            out[int(v)] = int(c)
        except ValueError:
            raise ValidationError("vertex costs must look like '0:3,2:1'") from None
    return out


def cmd_reduce(args: argparse.Namespace) -> int:
    inst = parse_instance(_load(args.instance))
    comments: list[str] = []

    if args.reduction == "scss-ewm":
        if not inst.directed:
            raise ValidationError("scss-ewm expects a directed instance")
        if args.terminals is None:
            raise ValidationError("scss-ewm requires --terminals")
        art = scss_to_ewm(inst.graph, _parse_terminals(args.terminals), k=args.k)
    elif args.reduction == "lengths-unit":
        if not inst.directed or inst.query_kind != "ewm":
            raise ValidationError("lengths-unit expects a directed ewm instance")
        s, t, r, q = inst.spec.pairs[0]
        art = lengths_to_unit(inst.graph, s, t, r, q)
    elif args.reduction == "vertex-costs":
        if not inst.directed or inst.query_kind != "ewm":
            raise ValidationError("vertex-costs expects a directed ewm instance")
        s, t, r, q = inst.spec.pairs[0]
        costs = _parse_vertex_costs(args.vertex_costs or "")
        art = vertex_costs_to_edge_costs(inst.graph, costs, s, t, r, q)
    elif args.reduction == "edge-costs":
        if not inst.directed or inst.query_kind != "ewm":
            raise ValidationError("edge-costs expects a directed ewm instance")
        s, t, r, q = inst.spec.pairs[0]
        art = edge_costs_to_vertex_costs(inst.graph, s, t, r, q)
        comments.extend(f"vertexcost {v} {c}" for v, c in sorted(art.vertex_cost.items()) if c)
    elif args.reduction == "undirected":
        if inst.directed or inst.query_kind != "ewm":
            raise ValidationError("the undirected reduction expects an undirected ewm instance")
        s, t, r, q = inst.spec.pairs[0]
        reduced = reduce_undirected_modulus(s, t, r, q)
        if reduced is None:
            reduced = (0, 1)  # empty walk suffices; keep an equivalent trivial query
        art = undirected_to_directed(inst.ugraph, s, t, *reduced)
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown reduction {args.reduction!r}")

    if args.names:
        comments.extend(f"vertex {v} {name}" for v, name in sorted(art.vertex_names.items()))
    out = Instance(True, art.graph, None, art.spec,
                   "ewm" if art.spec.k == 1 else "dsnm")
    sys.stdout.write(write_instance(out, extra_comments=comments))
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    n = args.vertices
    if n < 1:
        raise ValidationError("need at least one vertex")
    if args.undirected:
        pool = [(u, v) for u in range(n) for v in range(u, n)]
    else:
        pool = [(u, v) for u in range(n) for v in range(n)]
    m = min(args.edges, len(pool))
    edges = sorted(rng.sample(pool, m))
    lines = [f"{n} {m} {'undirected' if args.undirected else 'directed'}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    if args.query == "ewm":
        q = args.q if args.q is not None else 2
        lines.append(f"ewm {rng.randrange(n)} {rng.randrange(n)} {rng.randrange(q)} {q}")
    else:
        lines.append(f"dsnm {args.k}")
        for _ in range(args.k):
            q = rng.choice([2, 3]) if args.q is None else args.q
            lines.append(f"{rng.randrange(n)} {rng.randrange(n)} {rng.randrange(q)} {q}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modwalk",
        description="Edge-minimum walks with modular length constraints.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=["json-lines", "human"],
                       default="json-lines", help="output format")

    p = sub.add_parser("solve", help="solve an ewm or dsnm instance exactly")
    p.add_argument("instance", help="instance file ('-' for stdin)")
    p.add_argument("--omega", type=int, default=None,
                   help="override the derived domain-size bound")
    p.add_argument("--cost-mode", choices=["count", "weights"], default="count")
    p.add_argument("--budget", type=int, default=10_000_000,
                   help="state budget before giving up with a capacity error")
    p.add_argument("--threads", type=int, default=1,
                   help="reserved; expansion is sequential and results do not depend on it")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force reference answer (small instances)")
    p.add_argument("instance")
    p.add_argument("--cost-mode", choices=["count", "weights"], default="count")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("analyze", help="segment/chunk structure of a walk")
    p.add_argument("instance")
    p.add_argument("--walk", default=None, help="walk as a vertex sequence 'v0 v1 ...'")
    p.add_argument("--walk-file", default=None, help="file holding the vertex sequence")
    p.add_argument("--modulus", type=int, default=None,
                   help="modulus for achievable differences (default: the query's q)")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reduce", help="apply one of the problem reductions")
    p.add_argument("instance")
    p.add_argument("--reduction", required=True,
                   choices=["scss-ewm", "lengths-unit", "vertex-costs", "edge-costs", "undirected"])
    p.add_argument("--terminals", default=None, help="terminal list for scss-ewm, e.g. '0,3'")
    p.add_argument("--k", type=int, default=None, help="pad the terminal list to k entries")
    p.add_argument("--vertex-costs", default=None, help="source vertex costs, e.g. '0:3,2:1'")
    p.add_argument("--names", action="store_true",
                   help="emit '# vertex <id> <name>' comments for the back map")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gen", help="generate a deterministic random instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vertices", type=int, default=6)
    p.add_argument("--edges", type=int, default=10)
    p.add_argument("--query", choices=["ewm", "dsnm"], default="ewm")
    p.add_argument("--q", type=int, default=None,
                   help="modulus (default 2 for ewm, per-pair 2 or 3 for dsnm)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--undirected", action="store_true")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json-lines")
    try:
        return args.func(args)
    except ParseError as exc:
        return _error_exit("parse", str(exc), fmt, EXIT_USAGE, line=exc.line)
    except CapacityError as exc:
        return _error_exit("capacity", str(exc), fmt, EXIT_CAPACITY)
    except ValidationError as exc:
        return _error_exit("validation", str(exc), fmt, EXIT_USAGE)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
