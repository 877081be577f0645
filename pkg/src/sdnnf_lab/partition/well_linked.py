"""Well-linked sets and the separator inequality they imply."""
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import structlog

from sdnnf_lab.errors import OracleLimitError, SearchBudgetExhausted
from sdnnf_lab.graphs.charged_graph import ChargedGraph, VertexPartition
from sdnnf_lab.partition.treewidth import as_simple, treewidth

logger = structlog.get_logger(__name__)


def disjoint_paths(graph: nx.Graph, xs: Iterable[int], ys: Iterable[int]) -> int:
    """Maximum number of vertex-disjoint X-Y paths (length 0 allowed).

    Menger via max-flow: every vertex is split into in/out halves joined by
    a unit-capacity arc.
    """
    flow = nx.DiGraph()
    for v in graph.nodes:
        flow.add_edge(("in", v), ("out", v), capacity=1)
    for u, v in graph.edges():
        flow.add_edge(("out", u), ("in", v))
        flow.add_edge(("out", v), ("in", u))
    for x in xs:
        flow.add_edge("source", ("in", x))
    for y in ys:
        flow.add_edge(("out", y), "sink")
    if "source" not in flow or "sink" not in flow:
        return 0
    return int(nx.maximum_flow_value(flow, "source", "sink"))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise SearchBudgetExhausted("well_linked_set", self.used - 1)


def _well_linked(graph: nx.Graph, s: tuple[int, ...], budget: _Budget) -> bool:
    for size in range(1, len(s) + 1):
        subsets = list(combinations(s, size))
        for xs in subsets:
            for ys in subsets:
                if xs == ys:
                    continue
                budget.spend()
                if disjoint_paths(graph, xs, ys) < size:
                    return False
    return True


def is_well_linked(g: ChargedGraph | nx.Graph, s: Iterable[int]) -> bool:
    return _well_linked(as_simple(g), tuple(sorted(s)), _Budget(10**12))


@dataclass(frozen=True)
class WellLinkedResult:
    vertices: frozenset[int]
    complete: bool
    flow_checks: int
    treewidth: int | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    def bounds_hold(self, tw: int) -> bool:
        """tw <= wl + 1 <= 3 tw."""
        return tw <= self.size + 1 <= 3 * tw

    @property
    def bounds_checked(self) -> bool:
        return self.treewidth is not None


def _checked(result: WellLinkedResult, graph: nx.Graph) -> WellLinkedResult:
    try:
        tw = treewidth(graph)
    except OracleLimitError:
        logger.debug("well_linked_bound_unchecked", vertices=graph.number_of_nodes())
        return result
    if tw < 1:
        logger.debug("well_linked_bound_unchecked", treewidth=tw)
    elif not result.bounds_hold(tw):
        # stars K1,n with n >= 3: the leaves link through length-0 paths
        logger.warning(
            "well_linked_bound_violated", size=result.size, treewidth=tw, upper=3 * tw
        )
    return WellLinkedResult(result.vertices, result.complete, result.flow_checks, tw)


def well_linked_set(g: ChargedGraph | nx.Graph, budget: int = 200_000) -> WellLinkedResult:
    """The largest well-linked set, searched by increasing size.

    Subsets of a well-linked set are well-linked, so the search stops at the
    first size with no witness. When the flow budget runs out the best set
    found so far is returned with complete=False. A complete search is checked
    against tw <= |S| + 1 <= 3 tw and a failure is logged, not raised.
    """
    graph = as_simple(g)
    nodes = sorted(graph.nodes)
    spent = _Budget(budget)
    best: tuple[int, ...] = tuple(nodes[:1])
    try:
        for size in range(2, len(nodes) + 1):
            found = next(
                (s for s in combinations(nodes, size) if _well_linked(graph, s, spent)), None
            )
            if found is None:
                break
            best = found
    except SearchBudgetExhausted:
        logger.warning("well_linked_budget_exhausted", best=len(best), budget=budget)
        return WellLinkedResult(frozenset(best), False, spent.used)
    logger.debug("well_linked_set_found", size=len(best), flow_checks=spent.used)
    return _checked(WellLinkedResult(frozenset(best), True, spent.used), graph)


def check_separator_property(
    g: ChargedGraph, s: Iterable[int], partition: VertexPartition
) -> bool:
    """|E(A, B)| >= min(|A & S|, |B & S|)."""
    ss = set(s)
    cut = len(g.cut_edges(partition.a, partition.b))
    return cut >= min(len(partition.a & ss), len(partition.b & ss))
