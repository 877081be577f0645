"""Graph families with deterministic edge numbering.

Edges are normalized to u < v, sorted lexicographically, then numbered 0..
with variables 1.. in that order.
"""
from collections.abc import Callable, Iterable
from enum import Enum

import networkx as nx
import numpy as np

from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.graphs.tseitin import components


class ChargeOption(str, Enum):
    ALL_ZERO = "all_zero"
    SINGLE_ONE = "single_one"
    RANDOM = "random"
    TARGET_UNSAT = "target_unsat"


def _numbered(n: int, pairs: Iterable[tuple[int, int]]) -> ChargedGraph:
    ordered = sorted((min(u, v), max(u, v)) for u, v in pairs)
    return ChargedGraph.from_pairs(range(n), ordered)


def grid(rows: int, cols: int) -> ChargedGraph:
    """Vertex (r, c) is r * cols + c."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                pairs.append((v, v + 1))
            if r + 1 < rows:
                pairs.append((v, v + cols))
    return _numbered(rows * cols, pairs)


def cycle(n: int) -> ChargedGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return _numbered(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> ChargedGraph:
    if n < 1:
        raise ValueError("a path needs at least 1 vertex")
    return _numbered(n, ((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> ChargedGraph:
    if n < 1:
        raise ValueError("a complete graph needs at least 1 vertex")
    return _numbered(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def random_regular(n: int, d: int, seed: int = 0) -> ChargedGraph:
    if d >= n or (n * d) % 2:
        raise ValueError(f"no {d}-regular simple graph on {n} vertices")
    h = nx.random_regular_graph(d, n, seed=seed)
    return _numbered(n, h.edges())


def with_charges(
    g: ChargedGraph,
    option: ChargeOption,
    seed: int = 0,
    vertex: int | None = None,
) -> ChargedGraph:
    """Assign charges; TARGET_UNSAT puts an odd total on every component."""
    charge = dict.fromkeys(g.vertices, 0)
    match option:
        case ChargeOption.ALL_ZERO:
            pass
        case ChargeOption.SINGLE_ONE:
            v = g.vertices[0] if vertex is None else vertex
            if v not in charge:
                raise ValueError(f"vertex {v} is not in the graph")
            charge[v] = 1
        case ChargeOption.RANDOM:
            rng = np.random.default_rng(seed)
            bits = rng.integers(0, 2, size=len(g.vertices))
            charge = {v: int(b) for v, b in zip(g.vertices, bits, strict=True)}
        case ChargeOption.TARGET_UNSAT:
            for comp in components(g):
                charge[min(comp)] = 1
    return g.with_charges(charge)


Family = Callable[[int, int], ChargedGraph]

FAMILIES: dict[str, Family] = {
    "grid": lambda n, seed: grid(n, n),
    "cycle": lambda n, seed: cycle(n),
    "complete": lambda n, seed: complete(n),
    "random_regular3": lambda n, seed: random_regular(n, 3, seed),
    "path": lambda n, seed: path(n),
}


def family(name: str, n: int, seed: int = 0) -> ChargedGraph:
    try:
        build = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown graph family {name!r}; known: {sorted(FAMILIES)}") from None
    return build(n, seed)
