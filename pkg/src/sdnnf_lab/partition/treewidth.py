"""Exact treewidth with a verifiable tree decomposition.

The exact method is a dynamic program over sets of already-eliminated
vertices, pruned by a min-fill upper bound and seeded with a minor-min-width
lower bound. An independent branch-and-bound over elimination orderings
serves as a cross-check on small graphs.
"""
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import networkx as nx
import structlog

from sdnnf_lab.errors import InvariantViolation, OracleLimitError
from sdnnf_lab.graphs.charged_graph import ChargedGraph

logger = structlog.get_logger(__name__)

DEFAULT_MAX_VERTICES = 20
SEARCH_MAX_VERTICES = 10


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree(self) -> nx.Graph:
        t = nx.Graph()
        t.add_nodes_from(range(len(self.bags)))
        t.add_edges_from(self.edges)
        return t

    def dumps(self) -> str:
        lines = [f"td {len(self.bags)} {self.width}"]
        lines.extend(
            " ".join(["b", str(i), *map(str, sorted(bag))]) for i, bag in enumerate(self.bags)
        )
        lines.extend(f"t {i} {j}" for i, j in self.edges)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DecompositionCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class TreewidthResult:
    width: int
    decomposition: TreeDecomposition
    method: str


def as_simple(g: ChargedGraph | nx.Graph) -> nx.Graph:
    if isinstance(g, ChargedGraph):
        return g.simple()
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    h.add_edges_from((u, v) for u, v in g.edges() if u != v)
    return h


def verify_decomposition(
    g: ChargedGraph | nx.Graph, td: TreeDecomposition, claimed: int | None = None
) -> DecompositionCheck:
    """Check coverage, the running-intersection property and the claimed width."""
    graph = as_simple(g)
    vertices = set(graph.nodes)
    if not td.bags:
        return DecompositionCheck(not vertices, "no bags")
    tree = td.tree()
    if not nx.is_tree(tree):
        return DecompositionCheck(False, "bags do not form a tree")
    covered = set().union(*td.bags)
    if covered != vertices:
        return DecompositionCheck(False, f"bags cover {sorted(covered ^ vertices)} wrongly")
    for u, v in graph.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            return DecompositionCheck(False, f"edge {u}-{v} lies in no bag")
    for v in vertices:
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        if not nx.is_connected(tree.subgraph(holding)):
            return DecompositionCheck(False, f"bags holding {v} are not connected")
    if claimed is not None and claimed != td.width:
        return DecompositionCheck(False, f"claimed width {claimed} but bags give {td.width}")
    return DecompositionCheck(True)


def decomposition_from_order(g: ChargedGraph | nx.Graph, order: Sequence[int]) -> TreeDecomposition:
    """Bags {v} + later neighbours in the filled graph, linked to the first eliminated one."""
    h = as_simple(g)
    position = {v: i for i, v in enumerate(order)}
    bags: list[frozenset[int]] = []
    later: list[set[int]] = []
    for v in order:
        nbrs = set(h[v])
        bags.append(frozenset(nbrs | {v}))
        later.append(nbrs)
        h.add_edges_from(combinations(nbrs, 2))
        h.remove_node(v)
    edges: list[tuple[int, int]] = []
    roots: list[int] = []
    for i, nbrs in enumerate(later):
        if nbrs:
            edges.append((i, min(position[w] for w in nbrs)))
        else:
            roots.append(i)
    # roots belong to different components and share no vertex
    edges.extend(zip(roots, roots[1:], strict=False))
    return TreeDecomposition(tuple(bags), tuple(edges))


def _fill_in(h: nx.Graph, v: int) -> int:
    return sum(1 for a, b in combinations(h[v], 2) if not h.has_edge(a, b))


def _greedy_order(graph: nx.Graph, score: str) -> tuple[int, list[int]]:
    h = graph.copy()
    width, order = 0, []
    while len(h):
        if score == "fill":
            v = min(h, key=lambda u: (_fill_in(h, u), h.degree(u), u))
        else:
            v = min(h, key=lambda u: (h.degree(u), u))
        width = max(width, h.degree(v))
        h.add_edges_from(combinations(h[v], 2))
        h.remove_node(v)
        order.append(v)
    return width, order


def upper_bound(graph: nx.Graph) -> tuple[int, list[int]]:
    """Best of the min-fill and min-degree elimination orderings."""
    return min(_greedy_order(graph, "fill"), _greedy_order(graph, "degree"), key=lambda t: t[0])


def lower_bound(graph: nx.Graph) -> int:
    """Minor-min-width: contract a min-degree vertex into its least-shared neighbour."""
    h = graph.copy()
    best = 0
    while len(h) > 1:
        u = min(h, key=lambda w: (h.degree(w), w))
        best = max(best, h.degree(u))
        nbrs = set(h[u])
        if not nbrs:
            h.remove_node(u)
            continue
        v = min(nbrs, key=lambda w: (len(set(h[w]) & nbrs), w))
        h = nx.contracted_nodes(h, v, u, self_loops=False)
    return best


def _reach_count(adj: list[int], s: int, v: int) -> int:
    """Vertices outside s + v reachable from v through s."""
    seen = 1 << v
    frontier = 1 << v
    reach = 0
    while frontier:
        bit = frontier & -frontier
        frontier ^= bit
        nb = adj[bit.bit_length() - 1] & ~seen
        seen |= nb
        reach |= nb & ~s
        frontier |= nb & s
    return reach.bit_count()


def _elimination_dp(graph: nx.Graph, ub: int) -> tuple[int, list[int]] | None:
    """Exact width below ub with a witnessing order, or None when ub is optimal."""
    nodes = sorted(graph.nodes)
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    adj = [0] * n
    for u, v in graph.edges():
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    best = ub
    best_state: int | None = None
    parent: dict[int, tuple[int, int]] = {}
    layer: dict[int, int] = {0: -1}
    while layer:
        nxt: dict[int, int] = {}
        for s, val in layer.items():
            rest = n - s.bit_count()
            if max(val, rest - 1) < best:
                best, best_state = max(val, rest - 1), s
            for v in range(n):
                if s >> v & 1:
                    continue
                w = max(val, _reach_count(adj, s, v))
                if w >= best:
                    continue
                t = s | (1 << v)
                if w < nxt.get(t, best):
                    nxt[t] = w
                    parent[t] = (s, v)
        layer = nxt
    if best_state is None:
        return None
    prefix: list[int] = []
    s = best_state
    while s:
        s, v = parent[s]
        prefix.append(v)
    prefix.reverse()
    done = set(prefix)
    order = [nodes[v] for v in prefix] + [nodes[v] for v in range(n) if v not in done]
    return best, order


def _component_order(graph: nx.Graph) -> tuple[int, list[int], str]:
    ub, order = upper_bound(graph)
    if lower_bound(graph) >= ub:
        return ub, order, "bounds"
    found = _elimination_dp(graph, ub)
    if found is None:
        return ub, order, "dp"
    return found[0], found[1], "dp"


def treewidth_exact(
    g: ChargedGraph | nx.Graph, max_vertices: int = DEFAULT_MAX_VERTICES
) -> TreewidthResult:
    """Exact treewidth, component by component, with a verified decomposition."""
    graph = as_simple(g)
    if graph.number_of_nodes() > max_vertices:
        raise OracleLimitError(graph.number_of_nodes(), max_vertices)
    width, order, methods = -1, [], set()
    for comp in sorted(nx.connected_components(graph), key=min):
        w, o, method = _component_order(graph.subgraph(comp).copy())
        width = max(width, w)
        order.extend(o)
        methods.add(method)
    td = decomposition_from_order(graph, order)
    if td.width != width:
        raise InvariantViolation("treewidth_witness", width=width, witness=td.width)
    return TreewidthResult(width, td, "dp" if "dp" in methods else "bounds")


@lru_cache(maxsize=4096)
def _cached_width(
    vertices: frozenset[int], edges: frozenset[tuple[int, int]], max_vertices: int
) -> int:
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from(edges)
    return treewidth_exact(graph, max_vertices).width


def treewidth(g: ChargedGraph | nx.Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> int:
    """tw(G), memoized on the vertex and edge sets."""
    graph = as_simple(g)
    edges = frozenset((min(u, v), max(u, v)) for u, v in graph.edges())
    return _cached_width(frozenset(graph.nodes), edges, max_vertices)


def induced_treewidth(
    g: ChargedGraph, vertices: Iterable[int], max_vertices: int = DEFAULT_MAX_VERTICES
) -> int:
    return treewidth(g.induced(vertices), max_vertices)


def _is_simplicial(h: nx.Graph, v: int) -> bool:
    return all(h.has_edge(a, b) for a, b in combinations(h[v], 2))


def treewidth_by_search(
    g: ChargedGraph | nx.Graph, max_vertices: int = SEARCH_MAX_VERTICES
) -> int:
    """Branch and bound over elimination orderings, independent of the DP."""
    graph = as_simple(g)
    if graph.number_of_nodes() > max_vertices:
        raise OracleLimitError(graph.number_of_nodes(), max_vertices)
    if graph.number_of_nodes() == 0:
        return -1
    best = upper_bound(graph)[0]

    def search(h: nx.Graph, width: int) -> None:
        nonlocal best
        if len(h) <= 1:
            best = min(best, width)
            return
        if max(width, lower_bound(h)) >= best:
            return
        candidates = sorted(h)
        simplicial = next((v for v in candidates if _is_simplicial(h, v)), None)
        if simplicial is not None:
            candidates = [simplicial]
        for v in candidates:
            nxt = h.copy()
            nxt.add_edges_from(combinations(h[v], 2))
            nxt.remove_node(v)
            search(nxt, max(width, h.degree(v)))

    search(graph, 0)
    return best
