"""Connectivity helpers: components, 2-connectivity and 1-separators."""
from collections.abc import Callable, Iterable

import networkx as nx

from sdnnf_lab.errors import InvariantViolation
from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.graphs.tseitin import components


def is_connected(g: ChargedGraph, vertices: Iterable[int] | None = None) -> bool:
    h = g if vertices is None else g.induced(vertices)
    return len(h.vertices) > 0 and nx.is_connected(h.simple())


def is_2connected(g: ChargedGraph) -> bool:
    """Connected, at least two vertices, and no vertex whose removal disconnects it."""
    if len(g.vertices) < 2:
        return False
    return nx.is_biconnected(g.simple())


def one_separators(g: ChargedGraph) -> list[int]:
    return sorted(nx.articulation_points(g.simple()))


def bodlaender_component(
    g: ChargedGraph, u: int, treewidth: Callable[[ChargedGraph], int]
) -> frozenset[int]:
    """A component V' of G - u with tw(G[V' + u]) = tw(G).

    A tree decomposition of G glues those of the pieces G[V' + u] at u, so
    one of them attains the treewidth of G.
    """
    target = treewidth(g)
    rest = g.induced(v for v in g.vertices if v != u)
    for comp in components(rest):
        if treewidth(g.induced(comp | {u})) == target:
            return comp
    raise InvariantViolation("separator_component", vertex=u, treewidth=target)


__all__ = [
    "bodlaender_component",
    "components",
    "is_2connected",
    "is_connected",
    "one_separators",
]
