"""Bipartitions with large treewidth on both sides.

`theorem4_partition` runs the exchange argument over acceptable partitions:
tripartition the contracted graph, and while the second-best part has low
treewidth, refine one low-treewidth part with BetterPartition. Each round
strictly lowers |E(G_C)|. When the required bound is 0 every connected
bipartition qualifies and the most useful one is searched for directly.

`lemma4_partition` then shrinks B along 1-separators until it is 2-connected.
"""
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx
import structlog

from sdnnf_lab.errors import InvariantViolation, PreconditionError
from sdnnf_lab.graphs.charged_graph import ChargedGraph, VertexPartition
from sdnnf_lab.graphs.connectivity import (
    bodlaender_component,
    is_2connected,
    is_connected,
    one_separators,
)
from sdnnf_lab.partition.contracted import ContractedGraph, is_acceptable
from sdnnf_lab.partition.params import DEFAULT_PARAMS, PartitionParams
from sdnnf_lab.partition.splitting import DEFAULT_MAX_COMPONENTS, improve
from sdnnf_lab.partition.treewidth import DEFAULT_MAX_VERTICES, treewidth
from sdnnf_lab.partition.tripartition import (
    DEFAULT_TRIALS,
    EXHAUSTIVE_MAX_BLOCKS,
    tripartition,
)
from sdnnf_lab.partition.well_linked import well_linked_set

logger = structlog.get_logger(__name__)

EXHAUSTIVE_MAX_VERTICES = 12


@dataclass(frozen=True)
class Bipartition:
    a: frozenset[int]
    b: frozenset[int]
    treewidth_a: int
    treewidth_b: int
    bound: int
    rounds: int = 0
    method: str = "exchange"

    @property
    def partition(self) -> VertexPartition:
        return VertexPartition(self.a, self.b)

    def checks(self, g: ChargedGraph) -> dict[str, bool]:
        return {
            "covers": self.partition.covers(g),
            "a_connected": is_connected(g, self.a),
            "b_connected": is_connected(g, self.b),
            "b_2connected": is_2connected(g.induced(self.b)),
            "treewidth_a": self.treewidth_a >= self.bound,
            "treewidth_b": self.treewidth_b >= self.bound,
        }


@dataclass(frozen=True)
class PartitionSearch:
    """Budgets shared by the bipartition searches."""

    seed: int = 0
    max_vertices: int = DEFAULT_MAX_VERTICES
    well_linked_budget: int = 200_000
    trials: int = DEFAULT_TRIALS
    exhaustive_max_blocks: int = EXHAUSTIVE_MAX_BLOCKS
    max_components: int = DEFAULT_MAX_COMPONENTS
    exhaustive_max_vertices: int = EXHAUSTIVE_MAX_VERTICES
    strict: bool = True


def _tw(g: ChargedGraph, vertices: frozenset[int], search: PartitionSearch) -> int:
    return treewidth(g.induced(vertices), search.max_vertices)


def _connected_pair(g: ChargedGraph, a: frozenset[int], b: frozenset[int]) -> bool:
    return bool(a) and bool(b) and is_connected(g, a) and is_connected(g, b)


def _width_cap(g: ChargedGraph, connected: frozenset[int]) -> int:
    """Upper bound on tw(G[X]) for connected X: |X| - 1 and cycle rank + 1."""
    simple = g.induced(connected).simple()
    rank = simple.number_of_edges() - simple.number_of_nodes() + 1
    return min(len(connected) - 1, rank + 1)


def _candidates(g: ChargedGraph, search: PartitionSearch) -> Iterator[frozenset[int]]:
    vertices = list(g.vertices)
    if len(vertices) <= search.exhaustive_max_vertices:
        # the first vertex stays on side B
        rest = vertices[1:]
        for size in range(1, len(vertices)):
            for a in combinations(rest, size):
                yield frozenset(a)
        return
    h = g.simple()
    orders = [vertices]
    orders.extend([v, *(w for _, w in nx.bfs_edges(h, v))] for v in vertices)
    for order in orders:
        for i in range(1, len(order)):
            yield frozenset(order[:i])


def best_connected_bipartition(
    g: ChargedGraph, search: PartitionSearch
) -> tuple[frozenset[int], frozenset[int]]:
    """Connected (A, B) maximizing min(tw(G[A]), tw(G[B])), then balance.

    Exhaustive on small graphs; larger ones try the prefixes of the vertex
    order and of every breadth-first order.
    """
    everything = frozenset(g.vertices)
    n = len(everything)
    seen: set[frozenset[int]] = set()
    pairs = []
    for a in _candidates(g, search):
        b = everything - a
        key = min(a, b, key=lambda s: (len(s), sorted(s)))
        if key in seen:
            continue
        seen.add(key)
        pairs.append((abs(n - 2 * len(a)), sorted(a), a, b))
    pairs.sort(key=lambda t: (t[0], t[1]))
    best: tuple[int, frozenset[int], frozenset[int]] | None = None
    for _, _, a, b in pairs:
        # later pairs are no better balanced, so only a strictly wider one wins
        if best is not None and min(len(a), len(b)) - 1 <= best[0]:
            continue
        if not _connected_pair(g, a, b):
            continue
        if best is not None and min(_width_cap(g, a), _width_cap(g, b)) <= best[0]:
            continue
        low = min(_tw(g, a, search), _tw(g, b, search))
        if best is None or low > best[0]:
            best = (low, a, b)
    if best is None:
        raise PreconditionError("connected_bipartition", "graph has no connected bipartition")
    return best[1], best[2]


def _make_connected(
    g: ChargedGraph, a: frozenset[int], b: frozenset[int], search: PartitionSearch
) -> tuple[frozenset[int], frozenset[int]]:
    """Keep the highest-treewidth component of B, then of A, without lowering either."""

    def top_component(side: frozenset[int]) -> frozenset[int]:
        comps = sorted(
            (frozenset(c) for c in nx.connected_components(g.induced(side).simple())),
            key=min,
        )
        return max(comps, key=lambda c: _tw(g, c, search))

    everything = frozenset(g.vertices)
    b = top_component(b)
    a = top_component(everything - b)
    # every other component touches B since G is connected
    return a, everything - a


def _exchange(
    g: ChargedGraph, params: PartitionParams, bound: int, search: PartitionSearch
) -> tuple[frozenset[int], frozenset[int], int]:
    wl = well_linked_set(g, search.well_linked_budget)
    s_star, k = wl.vertices, wl.size
    delta = g.max_degree()
    c = ContractedGraph.singletons(g)
    if search.strict and not is_acceptable(c, s_star, params, k, delta):
        raise PreconditionError(
            "acceptable_partition", "singleton partition is not acceptable for these params"
        )
    rounds = 0
    while True:
        tri = tripartition(
            c,
            search.seed + rounds,
            params,
            trials=search.trials,
            exhaustive_max_blocks=search.exhaustive_max_blocks,
        )
        widths = {p: _tw(g, c.uncontract(p), search) for p in tri.parts}
        ranked = sorted(tri.parts, key=lambda p: (-widths[p], p))
        if widths[ranked[1]] >= bound:
            a = c.uncontract(ranked[0])
            return a, frozenset(g.vertices) - a, rounds
        low = [
            p
            for p in ranked[1:]
            if widths[p] < bound and len(c.uncontract(p) & s_star) <= Fraction(k, 2)
        ]
        if not low:
            raise InvariantViolation("low_treewidth_part", widths=sorted(widths.values()))
        step = improve(
            c,
            low[0],
            params,
            k,
            delta,
            max_components=search.max_components,
            strict=search.strict,
        )
        if step.after.edge_count() >= c.edge_count():
            raise InvariantViolation(
                "contracted_edges_decrease",
                before=c.edge_count(),
                after=step.after.edge_count(),
            )
        if search.strict and not is_acceptable(step.after, s_star, params, k, delta):
            raise InvariantViolation("acceptable_after_improvement", round=rounds)
        c = step.after
        rounds += 1


def theorem4_partition(
    g: ChargedGraph,
    params: PartitionParams = DEFAULT_PARAMS,
    search: PartitionSearch | None = None,
) -> Bipartition:
    """(A, B) with tw(G[A]), tw(G[B]) >= floor(alpha tw(G) / delta^2), both connected."""
    search = search or PartitionSearch()
    if len(g.vertices) < 2 or not is_connected(g):
        raise PreconditionError("connected", "graph must be connected with >= 2 vertices")
    tw = treewidth(g, search.max_vertices)
    bound = params.side_bound(tw, g.max_degree())
    if bound <= 0:
        a, b = best_connected_bipartition(g, search)
        rounds, method = 0, "vacuous"
    else:
        a, b, rounds = _exchange(g, params, bound, search)
        a, b = _make_connected(g, a, b, search)
        method = "exchange"
    result = Bipartition(a, b, _tw(g, a, search), _tw(g, b, search), bound, rounds, method)
    if min(result.treewidth_a, result.treewidth_b) < bound:
        raise InvariantViolation(
            "side_treewidth", a=result.treewidth_a, b=result.treewidth_b, bound=bound
        )
    logger.info(
        "theorem4_partition_found",
        method=method,
        rounds=rounds,
        treewidth=tw,
        bound=bound,
        sides=(len(a), len(b)),
    )
    return result


def lemma4_partition(
    g: ChargedGraph,
    params: PartitionParams = DEFAULT_PARAMS,
    search: PartitionSearch | None = None,
) -> Bipartition:
    """Shrink B to a 2-connected piece of the same treewidth; A stays connected."""
    search = search or PartitionSearch()
    if not is_2connected(g):
        raise PreconditionError("two_connected", "graph must be 2-connected")
    start = theorem4_partition(g, params, search)
    a, b = (start.a, start.b) if len(start.b) >= len(start.a) else (start.b, start.a)
    shrinks = 0
    while True:
        gb = g.induced(b)
        separators = one_separators(gb)
        if not separators:
            break
        sep = separators[0]
        comp = bodlaender_component(gb, sep, lambda h: treewidth(h, search.max_vertices))
        kept = comp | {sep}
        a, b = a | (b - kept), kept
        shrinks += 1
    result = Bipartition(
        a, b, _tw(g, a, search), _tw(g, b, search), start.bound, start.rounds, start.method
    )
    checks = result.checks(g)
    failed = sorted(name for name, ok in checks.items() if not ok)
    if failed:
        raise InvariantViolation("lemma4_postconditions", failed=failed)
    logger.info("lemma4_partition_found", shrinks=shrinks, sides=(len(a), len(b)))
    return result
