"""Split, BetterPartition and the charging replay over the split trace.

All out-sets are taken in the whole graph G. Exact rationals throughout.
"""
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import networkx as nx
import structlog

from sdnnf_lab.errors import InvariantViolation, PreconditionError, TreewidthTooLarge
from sdnnf_lab.graphs.charged_graph import ChargedGraph, Edge
from sdnnf_lab.partition.contracted import ContractedGraph
from sdnnf_lab.partition.params import PartitionParams

logger = structlog.get_logger(__name__)

DEFAULT_MAX_COMPONENTS = 16


@dataclass(frozen=True)
class SplitResult:
    a: frozenset[int]
    b: frozenset[int]
    s: frozenset[int]
    cut: int


@dataclass
class SplitTrace:
    """Rooted binary tree of splits; node 0 maps to U."""

    sets: list[frozenset[int]] = field(default_factory=list)
    children: dict[int, tuple[int, int]] = field(default_factory=dict)

    @classmethod
    def rooted_at(cls, u: Iterable[int]) -> "SplitTrace":
        return cls([frozenset(u)])

    def add_split(self, node: int, a: frozenset[int], b: frozenset[int]) -> tuple[int, int]:
        if node in self.children:
            raise ValueError(f"trace node {node} is already split")
        if a | b != self.sets[node] or a & b:
            raise InvariantViolation("split_partitions_parent", node=node)
        left, right = len(self.sets), len(self.sets) + 1
        self.sets.extend((a, b))
        self.children[node] = (left, right)
        return left, right

    @property
    def split_count(self) -> int:
        return len(self.children)

    def leaves(self) -> list[int]:
        return [t for t in range(len(self.sets)) if t not in self.children]

    def bottom_up(self) -> Iterator[int]:
        """Internal nodes, each after both of its children."""
        order: list[int] = []
        stack = [(0, False)] if self.sets else []
        while stack:
            t, expanded = stack.pop()
            if t not in self.children:
                continue
            if expanded:
                order.append(t)
                continue
            left, right = self.children[t]
            stack.extend(((t, True), (right, False), (left, False)))
        return iter(order)

    def check(self) -> None:
        for t, (left, right) in self.children.items():
            if self.sets[left] | self.sets[right] != self.sets[t]:
                raise InvariantViolation("trace_children_cover", node=t)
            if self.sets[left] & self.sets[right]:
                raise InvariantViolation("trace_children_disjoint", node=t)


def _out_in(g: ChargedGraph, y: frozenset[int]) -> dict[int, int]:
    """For each vertex of Y, how many edges of out(Y) it carries."""
    counts: dict[int, int] = {}
    for e in g.out(y):
        inner = e.u if e.u in y else e.v
        counts[inner] = counts.get(inner, 0) + 1
    return counts


def choose_s(g: ChargedGraph, y: frozenset[int], delta_prime: Fraction) -> frozenset[int]:
    """Smallest S of out(Y)-endpoints in Y with |out(S) & out(Y)| >= delta'.

    Ties go to the lexicographically first vertex tuple.
    """
    counts = _out_in(g, y)
    boundary = sorted(counts)
    for size in range(1, len(boundary) + 1):
        for s in combinations(boundary, size):
            if sum(counts[v] for v in s) >= delta_prime:
                return frozenset(s)
    raise PreconditionError("split_out_degree", f"|out(Y)| = {sum(counts.values())} < {delta_prime}")


def _components_without(edges: list[Edge], y: frozenset[int], removed: set[int]) -> list[frozenset[int]]:
    h = nx.Graph()
    h.add_nodes_from(y)
    h.add_edges_from((e.u, e.v) for e in edges if e.id not in removed)
    return sorted((frozenset(c) for c in nx.connected_components(h)), key=min)


def split(
    g: ChargedGraph,
    y: Iterable[int],
    params: PartitionParams,
    k: int,
    delta: int,
    *,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    strict: bool = True,
) -> SplitResult:
    """Partition Y into (A_Y, B_Y) with |E(A_Y, B_Y)| < gamma min(|S & A_Y|, |S & B_Y|).

    Any such cut has fewer than gamma |S| / 2 edges, so the search removes
    every small edge set F from G[Y] and tries the unions of the remaining
    components. Up to `max_components` components every union is tried; above
    that one union is built greedily, balancing S across the two sides.
    Raises TreewidthTooLarge when no qualifying partition is found.
    """
    ys = frozenset(y)
    dp = params.delta_prime(k, delta)
    out_y = g.out(ys)
    if len(out_y) < dp:
        raise PreconditionError("split_out_degree", f"|out(Y)| = {len(out_y)} < {dp}")
    s = choose_s(g, ys, dp)
    gamma = params.gamma
    inner = sorted(g.internal_edges(ys), key=lambda e: e.id)
    max_cut = 0
    while Fraction(max_cut + 1) < gamma * (len(s) // 2):
        max_cut += 1
    for size in range(max_cut + 1):
        for removed in combinations(inner, size):
            comps = _components_without(inner, ys, {e.id for e in removed})
            if len(comps) < 2:
                continue
            if len(comps) > max_components:
                logger.debug("split_components_balanced", components=len(comps))
                found = _balanced_union(g, ys, s, comps, gamma)
            else:
                found = _first_qualifying(g, ys, s, comps, gamma)
            if found is not None:
                result = _orient(g, found, ys, s)
                if strict:
                    _check_split(g, ys, result, gamma, dp)
                return result
    raise TreewidthTooLarge(
        f"no cut of Y ({len(ys)} vertices) is sparser than gamma = {gamma} on |S| = {len(s)}"
    )


def _first_qualifying(
    g: ChargedGraph,
    y: frozenset[int],
    s: frozenset[int],
    comps: list[frozenset[int]],
    gamma: Fraction,
) -> frozenset[int] | None:
    # component 0 stays on side A, so each bipartition is met once
    for mask in range(0, 1 << (len(comps) - 1)):
        a = comps[0].union(*(comps[j + 1] for j in range(len(comps) - 1) if mask >> j & 1))
        if a == y:
            continue
        b = y - a
        cut = len(g.cut_edges(a, b))
        if cut < gamma * min(len(s & a), len(s & b)):
            return a
    return None


def _balanced_union(
    g: ChargedGraph,
    y: frozenset[int],
    s: frozenset[int],
    comps: list[frozenset[int]],
    gamma: Fraction,
) -> frozenset[int] | None:
    # largest share of S first, each to the side holding less of S
    a: set[int] = set()
    a_s = b_s = 0
    for comp in sorted(comps, key=lambda c: (-len(s & c), min(c))):
        share = len(s & comp)
        if a_s <= b_s:
            a |= comp
            a_s += share
        else:
            b_s += share
    side = frozenset(a)
    if side == y:
        return None
    cut = len(g.cut_edges(side, y - side))
    return side if cut < gamma * min(a_s, b_s) else None


def _orient(g: ChargedGraph, a: frozenset[int], y: frozenset[int], s: frozenset[int]) -> SplitResult:
    b = y - a
    if len(g.out(a)) > len(g.out(b)):
        a, b = b, a
    return SplitResult(a, b, s, len(g.cut_edges(a, b)))


def _check_split(
    g: ChargedGraph, y: frozenset[int], r: SplitResult, gamma: Fraction, dp: Fraction
) -> None:
    out_y = {e.id for e in g.out(y)}
    out_a = {e.id for e in g.out(r.a)} & out_y
    out_b = {e.id for e in g.out(r.b)} & out_y
    if not r.s & r.a or not r.s & r.b:
        raise InvariantViolation("split_sides_meet_s")
    if not r.cut < gamma * dp:
        raise InvariantViolation("split_cut_below_gamma_delta_prime", cut=r.cut)
    if not r.cut < gamma * min(len(out_a), len(out_b)):
        raise InvariantViolation("split_cut_below_gamma_out", cut=r.cut)
    if not len(g.out(r.a)) <= Fraction(len(out_y)) / (2 * (1 - gamma)):
        raise InvariantViolation("split_out_a", out_a=len(g.out(r.a)), out_y=len(out_y))
    if not len(g.out(r.b)) <= len(out_y):
        raise InvariantViolation("split_out_b", out_b=len(g.out(r.b)), out_y=len(out_y))


@dataclass(frozen=True)
class BetterPartitionResult:
    parts: tuple[frozenset[int], ...]
    trace: SplitTrace


def better_partition(
    g: ChargedGraph,
    u: Iterable[int],
    params: PartitionParams,
    k: int,
    delta: int,
    *,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    strict: bool = True,
) -> BetterPartitionResult:
    """Split every part with |out(Y)| >= delta', then break parts into components."""
    us = frozenset(u)
    dp = params.delta_prime(k, delta)
    trace = SplitTrace.rooted_at(us)
    pending: list[tuple[int, frozenset[int]]] = [(0, us)]
    done: list[frozenset[int]] = []
    while pending:
        node, y = pending.pop()
        if len(g.out(y)) < dp:
            done.append(y)
            continue
        r = split(g, y, params, k, delta, max_components=max_components, strict=strict)
        left, right = trace.add_split(node, r.a, r.b)
        pending.extend(((right, r.b), (left, r.a)))
    parts: list[frozenset[int]] = []
    for y in done:
        parts.extend(frozenset(c) for c in nx.connected_components(g.induced(y).simple()))
    parts.sort(key=min)
    if strict:
        trace.check()
        for p in parts:
            if not len(g.out(p)) < dp:
                raise InvariantViolation("better_partition_out_degree", part=sorted(p))
    logger.debug("better_partition_done", splits=trace.split_count, parts=len(parts))
    return BetterPartitionResult(tuple(parts), trace)


@dataclass(frozen=True)
class ChargeState:
    charges: dict[int, Fraction]
    total: Fraction
    m: int

    def nonzero(self) -> dict[int, Fraction]:
        return {e: c for e, c in self.charges.items() if c}


def charging(
    trace: SplitTrace, g: ChargedGraph, params: PartitionParams | None = None
) -> ChargeState:
    """Replay the splits bottom-up, moving charges onto out(A_Y) & out(Y).

    Checks that the total equals M, the number of split edges, and that only
    edges of out(U) end up charged. With params, also that no edge exceeds
    9 gamma.
    """
    trace.check()
    u = trace.sets[0] if trace.sets else frozenset()
    touched = {e.id for e in g.edges if e.u in u or e.v in u}
    charges: dict[int, Fraction] = dict.fromkeys(sorted(touched), Fraction(0))
    m = 0
    for t in trace.bottom_up():
        left, right = trace.children[t]
        y, a, b = trace.sets[t], trace.sets[left], trace.sets[right]
        out_y = {e.id for e in g.out(y)}
        targets = sorted({e.id for e in g.out(a)} & out_y)
        cut = [e.id for e in g.cut_edges(a, b)]
        if not targets:
            raise InvariantViolation("charging_targets_nonempty", node=t)
        m += len(cut)
        moved = sum((1 + charges[e] for e in cut), Fraction(0)) / len(targets)
        for e in targets:
            charges[e] += moved
        for e in cut:
            charges[e] = Fraction(0)
    total = sum(charges.values(), Fraction(0))
    if total != m:
        raise InvariantViolation("charging_total", total=total, m=m)
    boundary = {e.id for e in g.out(u)}
    stray = [e for e, c in charges.items() if c and e not in boundary]
    if stray:
        raise InvariantViolation("charging_interior_zero", edges=stray)
    if params is not None:
        worst = max(charges.values(), default=Fraction(0))
        if worst > params.charge_bound:
            raise InvariantViolation("charging_edge_bound", worst=worst, bound=params.charge_bound)
    return ChargeState(charges, total, m)


@dataclass(frozen=True)
class Improvement:
    before: ContractedGraph
    after: ContractedGraph
    result: BetterPartitionResult
    charges: ChargeState

    @property
    def residual(self) -> int:
        """|E(G_C')| - (|E(G_C)| - |E(G_C[U])| + M); zero by the accounting identity."""
        return self.after.edge_count() - (
            self.before.edge_count() - self._inner + self.charges.m
        )

    @property
    def _inner(self) -> int:
        return self.before.induced_edge_count(
            [i for i, b in enumerate(self.before.blocks) if b <= self.result.trace.sets[0]]
        )


def improve(
    c: ContractedGraph,
    part: Iterable[int],
    params: PartitionParams,
    k: int,
    delta: int,
    *,
    max_components: int = DEFAULT_MAX_COMPONENTS,
    strict: bool = True,
) -> Improvement:
    """Replace the blocks in `part` by BetterPartition of their union."""
    indices = sorted(set(part))
    u = c.uncontract(indices)
    result = better_partition(
        c.source, u, params, k, delta, max_components=max_components, strict=strict
    )
    after = c.replace(indices, result.parts)
    state = charging(result.trace, c.source, params if strict else None)
    step = Improvement(c, after, result, state)
    if strict and step.residual != 0:
        raise InvariantViolation("contracted_edge_identity", residual=step.residual)
    logger.info(
        "partition_improved",
        before=c.edge_count(),
        after=after.edge_count(),
        splits=state.m,
    )
    return step
