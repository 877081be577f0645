"""Tseitin formulas T(G, c) and their charge algebra."""
from collections.abc import Iterable, Mapping

import networkx as nx
import structlog

from sdnnf_lab.errors import PreconditionError
from sdnnf_lab.graphs.charged_graph import ChargedGraph, VertexPartition
from sdnnf_lab.logic.cnf import Clause, Cnf

logger = structlog.get_logger(__name__)


def parity_clauses(vars: list[int], charge: int) -> list[Clause]:
    """The clauses falsified exactly by the assignments violating sum(vars) = charge."""
    clauses: list[Clause] = []
    for row in range(1 << len(vars)):
        bits = [(row >> j) & 1 for j in range(len(vars))]
        if sum(bits) % 2 != charge:
            clauses.append(tuple(-v if bit else v for v, bit in zip(vars, bits, strict=True)))
    return clauses


def constraint_clauses(g: ChargedGraph, v: int) -> list[Clause]:
    """Clauses of the constraint of v: 2^(deg(v)-1) of them."""
    return parity_clauses(g.vars_of(v), g.charge[v])


def tseitin_cnf(g: ChargedGraph) -> Cnf:
    """T(G, c), vertex by vertex in ascending order.

    An isolated vertex with charge 1 contributes the empty clause.
    """
    clauses: list[Clause] = []
    for v in g.vertices:
        clauses.extend(constraint_clauses(g, v))
    if () in clauses:
        logger.info("tseitin_empty_clause", vertices=[v for v in g.vertices if g.degree(v) == 0])
    return Cnf(g.variables, tuple(clauses))


def components(g: ChargedGraph) -> list[frozenset[int]]:
    comps = [frozenset(c) for c in nx.connected_components(g.simple())]
    return sorted(comps, key=min)


def is_satisfiable_criterion(g: ChargedGraph) -> bool:
    """Every connected component has an even total charge."""
    return all(g.total_charge(c) % 2 == 0 for c in components(g))


def condition_charges(g: ChargedGraph, a: Mapping[int, int]) -> ChargedGraph:
    """Remove the assigned edges, flipping both endpoints of every edge set to 1."""
    outside = set(a) - g.variables
    if outside:
        raise ValueError(f"variables {sorted(outside)} are not edge variables")
    charge = dict(g.charge)
    for var, value in a.items():
        if value:
            e = g.edge_of_var(var)
            charge[e.u] ^= 1
            charge[e.v] ^= 1
    edges = tuple(e for e in g.edges if e.var not in a)
    return ChargedGraph(g.vertices, edges, charge)


def incomplete_constraints(f: Cnf, g: ChargedGraph) -> frozenset[int]:
    """Vertices whose constraint has a clause missing from f."""
    present = f.clause_set()
    owned: set[Clause] = set()
    incomplete: set[int] = set()
    for v in g.vertices:
        clauses = set(constraint_clauses(g, v))
        owned |= clauses
        if not clauses <= present:
            incomplete.add(v)
    stray = present - owned
    if stray:
        raise PreconditionError(
            "tseitin_subformula", f"clauses {sorted(stray)[:3]} belong to no constraint"
        )
    return frozenset(incomplete)


def satisfying_assignment(g: ChargedGraph) -> dict[int, int]:
    """A model of T(G, c) built by peeling a spanning forest from its leaves."""
    if not is_satisfiable_criterion(g):
        raise PreconditionError("tseitin_satisfiable", "some component has odd total charge")
    a = dict.fromkeys(sorted(g.variables), 0)
    simple = g.simple()
    for comp in components(g):
        root = min(comp)
        order = list(nx.bfs_tree(simple, root).nodes)
        parent: dict[int, int] = {}
        tree_var: dict[int, int] = {}
        seen = {root}
        for v in order:
            for e in g.incident(v):
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    parent[w] = v
                    tree_var[w] = e.var
        for v in reversed(order):
            if v == root:
                continue
            current = sum(a[e.var] for e in g.incident(v)) % 2
            if current != g.charge[v]:
                a[tree_var[v]] ^= 1
    return a


def satisfiable_side(g: ChargedGraph, partition: VertexPartition, a: Mapping[int, int]) -> str:
    """Which side of an unsatisfiable connected split becomes satisfiable under a.

    With a an assignment to E(A, B), every cut edge set to 1 flips exactly one
    vertex of A, so side A is satisfiable iff card(a) + sum_A c is even.
    """
    ones = sum(1 for value in a.values() if value)
    return "A" if (ones + g.total_charge(partition.a)) % 2 == 0 else "B"


def side_graph(g: ChargedGraph, side: Iterable[int], a: Mapping[int, int]) -> ChargedGraph:
    """G_side with the charges c^a after conditioning on the cut assignment a."""
    return condition_charges(g, a).induced(side)
