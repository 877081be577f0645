"""Charged multigraphs and vertex bipartitions.

Each edge carries its own propositional variable; parallel edges are allowed,
self-loops are not. Charges are 0 or 1 per vertex.
"""
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from sdnnf_lab.errors import FormatError


@dataclass(frozen=True, slots=True)
class Edge:
    id: int
    u: int
    v: int
    var: int

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u

    def touches(self, vertices: Iterable[int]) -> bool:
        s = set(vertices)
        return self.u in s or self.v in s


@dataclass(frozen=True)
class ChargedGraph:
    """G with charge function c; vertices are kept sorted."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    charge: Mapping[int, int]
    _incident: dict[int, tuple[Edge, ...]] = field(init=False, repr=False, compare=False)
    _by_var: dict[int, Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        vs = set(self.vertices)
        incident: dict[int, list[Edge]] = {v: [] for v in self.vertices}
        by_var: dict[int, Edge] = {}
        ids: set[int] = set()
        for e in self.edges:
            if e.u == e.v:
                raise ValueError(f"edge {e.id} is a self-loop")
            if e.u not in vs or e.v not in vs:
                raise ValueError(f"edge {e.id} has an endpoint outside the vertex set")
            if e.var <= 0 or e.var in by_var:
                raise ValueError(f"edge {e.id} has an invalid or repeated variable {e.var}")
            if e.id in ids:
                raise ValueError(f"edge id {e.id} is repeated")
            ids.add(e.id)
            by_var[e.var] = e
            incident[e.u].append(e)
            incident[e.v].append(e)
        if set(self.charge) != vs or any(c not in (0, 1) for c in self.charge.values()):
            raise ValueError("charges must map every vertex to 0 or 1")
        object.__setattr__(self, "charge", dict(sorted(self.charge.items())))
        object.__setattr__(self, "_incident", {v: tuple(es) for v, es in incident.items()})
        object.__setattr__(self, "_by_var", by_var)

    @classmethod
    def from_pairs(
        cls,
        vertices: Iterable[int],
        pairs: Iterable[tuple[int, int]],
        charge: Mapping[int, int] | None = None,
    ) -> "ChargedGraph":
        """Edges numbered 0.. and variables 1.. in the given order."""
        vs = tuple(vertices)
        edges = tuple(Edge(i, u, v, i + 1) for i, (u, v) in enumerate(pairs))
        return cls(vs, edges, dict(charge) if charge is not None else dict.fromkeys(vs, 0))

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(self._by_var)

    def incident(self, v: int) -> tuple[Edge, ...]:
        """E(v)."""
        return self._incident[v]

    def vars_of(self, v: int) -> list[int]:
        return sorted(e.var for e in self._incident[v])

    def edge_of_var(self, var: int) -> Edge:
        return self._by_var[var]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices), default=0)

    def total_charge(self, vertices: Iterable[int] | None = None) -> int:
        vs = self.vertices if vertices is None else vertices
        return sum(self.charge[v] for v in vs)

    def cut_edges(self, a: Iterable[int], b: Iterable[int]) -> tuple[Edge, ...]:
        """E(A, B)."""
        sa, sb = set(a), set(b)
        return tuple(
            e for e in self.edges if (e.u in sa and e.v in sb) or (e.u in sb and e.v in sa)
        )

    def out(self, s: Iterable[int]) -> tuple[Edge, ...]:
        """Edges with exactly one endpoint in s."""
        ss = set(s)
        return tuple(e for e in self.edges if (e.u in ss) != (e.v in ss))

    def internal_edges(self, s: Iterable[int]) -> tuple[Edge, ...]:
        ss = set(s)
        return tuple(e for e in self.edges if e.u in ss and e.v in ss)

    def induced(self, s: Iterable[int]) -> "ChargedGraph":
        """G[S] with the charges of S."""
        ss = set(s)
        return ChargedGraph(
            tuple(ss), self.internal_edges(ss), {v: self.charge[v] for v in ss}
        )

    def with_charges(self, charge: Mapping[int, int]) -> "ChargedGraph":
        return ChargedGraph(self.vertices, self.edges, charge)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        for v in self.vertices:
            g.add_node(v, charge=self.charge[v])
        for e in self.edges:
            g.add_edge(e.u, e.v, key=e.id, var=e.var)
        return g

    def simple(self) -> nx.Graph:
        """Underlying simple graph (parallel edges merged)."""
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.u, e.v) for e in self.edges)
        return g

    def dumps(self) -> str:
        lines = [f"graph {len(self.vertices)} {len(self.edges)}"]
        lines.extend(f"v {v} {self.charge[v]}" for v in self.vertices)
        lines.extend(f"e {e.id} {e.u} {e.v} {e.var}" for e in self.edges)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "ChargedGraph":
        rows = [
            (lineno, line.split())
            for lineno, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.startswith("c")
        ]
        if not rows or rows[0][1][0] != "graph" or len(rows[0][1]) != 3:
            raise FormatError("graph", "missing 'graph <n> <m>' header", 1)
        vertices: list[int] = []
        charge: dict[int, int] = {}
        edges: list[Edge] = []
        try:
            n, m = int(rows[0][1][1]), int(rows[0][1][2])
            for lineno, parts in rows[1:]:
                if parts[0] == "v" and len(parts) == 3:
                    v = int(parts[1])
                    vertices.append(v)
                    charge[v] = int(parts[2])
                elif parts[0] == "e" and len(parts) == 5:
                    edges.append(Edge(*(int(p) for p in parts[1:])))
                else:
                    raise FormatError("graph", f"bad line {' '.join(parts)!r}", lineno)
            if len(vertices) != n or len(set(vertices)) != n or len(edges) != m:
                raise FormatError("graph", f"header announces {n} vertices and {m} edges")
            return cls(tuple(vertices), tuple(edges), charge)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("graph", str(exc)) from exc


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint blocks A and B covering the vertex set."""

    a: frozenset[int]
    b: frozenset[int]

    @classmethod
    def of(cls, g: ChargedGraph, a: Iterable[int]) -> "VertexPartition":
        sa = frozenset(a)
        if not sa <= set(g.vertices):
            raise ValueError("block A has vertices outside the graph")
        return cls(sa, frozenset(g.vertices) - sa)

    def __post_init__(self) -> None:
        if self.a & self.b:
            raise ValueError("partition blocks overlap")

    def covers(self, g: ChargedGraph) -> bool:
        return self.a | self.b == frozenset(g.vertices)

    def swapped(self) -> "VertexPartition":
        return VertexPartition(self.b, self.a)

    def side(self, name: str) -> frozenset[int]:
        return self.a if name == "A" else self.b
