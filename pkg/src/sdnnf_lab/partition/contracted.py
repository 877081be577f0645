"""Contracted multigraphs G_C and acceptable partitions."""
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.partition.params import PartitionParams


@dataclass(frozen=True)
class ContractedGraph:
    """One vertex per block; |E(V_i, V_j)| parallel edges between blocks i and j."""

    source: ChargedGraph
    blocks: tuple[frozenset[int], ...]
    multiplicity: Counter[tuple[int, int]] = field(init=False, repr=False, compare=False)
    block_of: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        block_of: dict[int, int] = {}
        for i, block in enumerate(self.blocks):
            if not block:
                raise ValueError(f"block {i} is empty")
            for v in block:
                if v in block_of:
                    raise ValueError(f"vertex {v} lies in two blocks")
                block_of[v] = i
        if set(block_of) != set(self.source.vertices):
            raise ValueError("blocks do not cover the vertex set")
        mult: Counter[tuple[int, int]] = Counter()
        for e in self.source.edges:
            i, j = block_of[e.u], block_of[e.v]
            if i != j:
                mult[(min(i, j), max(i, j))] += 1
        object.__setattr__(self, "multiplicity", mult)
        object.__setattr__(self, "block_of", block_of)

    @classmethod
    def of(cls, g: ChargedGraph, blocks: Iterable[Iterable[int]]) -> "ContractedGraph":
        ordered = sorted((frozenset(b) for b in blocks), key=min)
        return cls(g, tuple(ordered))

    @classmethod
    def singletons(cls, g: ChargedGraph) -> "ContractedGraph":
        return cls(g, tuple(frozenset({v}) for v in g.vertices))

    @property
    def size(self) -> int:
        return len(self.blocks)

    def edge_count(self) -> int:
        return sum(self.multiplicity.values())

    def degree(self, i: int) -> int:
        """deg(nu_i) = |out(V_i)|."""
        return sum(m for (a, b), m in self.multiplicity.items() if i in (a, b))

    def max_degree(self) -> int:
        return max((self.degree(i) for i in range(self.size)), default=0)

    def induced_edge_count(self, part: Iterable[int]) -> int:
        """|E(G_C[part])| for a set of block indices."""
        ps = set(part)
        return sum(m for (a, b), m in self.multiplicity.items() if a in ps and b in ps)

    def uncontract(self, part: Iterable[int]) -> frozenset[int]:
        return frozenset().union(*(self.blocks[i] for i in part))

    def replace(self, old: Sequence[int], new_blocks: Iterable[frozenset[int]]) -> "ContractedGraph":
        """(C minus the old blocks) plus the new ones."""
        drop = set(old)
        kept = [b for i, b in enumerate(self.blocks) if i not in drop]
        return ContractedGraph.of(self.source, [*kept, *new_blocks])

    def to_networkx(self) -> nx.MultiGraph:
        h = nx.MultiGraph()
        h.add_nodes_from(range(self.size))
        for (a, b), m in sorted(self.multiplicity.items()):
            for _ in range(m):
                h.add_edge(a, b)
        return h


@dataclass(frozen=True)
class AcceptabilityReport:
    ok: bool
    delta_prime: Fraction
    half_k: Fraction
    degree_bound: bool
    edge_lower_bound: bool
    violations: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def is_acceptable(
    c: ContractedGraph,
    s_star: Iterable[int],
    params: PartitionParams,
    k: int,
    delta: int,
) -> AcceptabilityReport:
    """Every block has |out(V_i)| <= delta' and |V_i & S*| <= k/2.

    The report also carries the two consequences: max degree of G_C at most
    delta' and |E(G_C)| >= k/4.
    """
    ss = set(s_star)
    dp = params.delta_prime(k, delta)
    half = Fraction(k, 2)
    violations = []
    for i, block in enumerate(c.blocks):
        if c.degree(i) > dp:
            violations.append(f"block {i}: out-degree {c.degree(i)} > {dp}")
        if len(block & ss) > half:
            violations.append(f"block {i}: holds {len(block & ss)} well-linked vertices")
    return AcceptabilityReport(
        ok=not violations,
        delta_prime=dp,
        half_k=half,
        degree_bound=c.max_degree() <= dp,
        edge_lower_bound=c.edge_count() >= Fraction(k, 4),
        violations=tuple(violations),
    )
