"""Node store for structured DNNF circuits over one vtree.

Every node lives in a manager that owns a unique table, so structurally
identical nodes share an id and children always have smaller ids than their
parents. Node ``n`` carries a vtree node ``lam(n)``:

- a literal sits at the leaf of its variable;
- an AND node at ``t`` has its left child under ``left(t)`` and its right
  child under ``right(t)``;
- an OR node and both of its children share the same vtree node;
- constants carry an arbitrary vtree node. The shared ``false``/``true``
  constants sit at the root.

A constant-1 node placed under the sibling of a subcircuit lifts that
subcircuit one AND higher; this is how disjunctions of operands that live at
different vtree nodes are made to respect the OR condition.
"""
import sys
from collections.abc import Iterator, Mapping
from contextlib import contextmanager
from enum import IntEnum

import structlog

from sdnnf_lab.errors import InvariantViolation, ResourceLimitExceeded, VtreeMismatchError
from sdnnf_lab.logic.vtree import Vtree

logger = structlog.get_logger(__name__)

RECURSION_LIMIT = 100_000


class NodeKind(IntEnum):
    CONST = 0
    LIT = 1
    AND = 2
    OR = 3


@contextmanager
def deep_recursion(limit: int = RECURSION_LIMIT) -> Iterator[None]:
    """Raise the interpreter recursion limit for the duration of a block."""
    previous = sys.getrecursionlimit()
    sys.setrecursionlimit(max(previous, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(previous)


def apply_edge_bound(edges_a: int, edges_b: int) -> int:
    """Edge bound on a conjunction built from operands of the given sizes."""
    return 2 * (edges_a + 2) * (edges_b + 2)


class DnnfManager:
    """Hash-consed node store and node-level algorithms for one vtree."""

    def __init__(self, vtree: Vtree, *, limit: int | None = None, strict: bool = False):
        self.vtree = vtree
        self.limit = limit
        self.strict = strict
        self._kind: list[int] = []
        self._a: list[int] = []
        self._b: list[int] = []
        self._lam: list[int] = []
        self._vars: list[int] = []
        self._unique: dict[tuple[int, int, int, int], int] = {}
        self._and_cache: dict[tuple[int, int], int] = {}
        self._created = 0
        self._budget: int | None = None
        self.false = self.const(0)
        self.true = self.const(1)

    def __len__(self) -> int:
        return len(self._kind)

    # Node construction

    def _make(self, kind: int, a: int, b: int, lam: int) -> int:
        key = (kind, a, b, lam)
        node = self._unique.get(key)
        if node is not None:
            return node
        match kind:
            case NodeKind.CONST:
                mask = 0
            case NodeKind.LIT:
                mask = 1 << abs(a)
            case _:
                mask = self._vars[a] | self._vars[b]
        node = len(self._kind)
        self._kind.append(kind)
        self._a.append(a)
        self._b.append(b)
        self._lam.append(lam)
        self._vars.append(mask)
        self._unique[key] = node
        if kind != NodeKind.CONST:
            self._created += 1
            if self._budget is not None and self._created > self._budget:
                raise ResourceLimitExceeded(self._created, self._budget)
        return node

    def raw(self, kind: NodeKind, a: int, b: int, lam: int) -> int:
        """Create a node exactly as given, without simplification or checks."""
        return self._make(kind, a, b, lam)

    def const(self, value: int, lam: int = 0) -> int:
        return self._make(NodeKind.CONST, 1 if value else 0, 0, lam)

    def literal(self, lit: int) -> int:
        return self._make(NodeKind.LIT, lit, 0, self.vtree.leaf_of(abs(lit)))

    def _and_at(self, t: int, left: int, right: int) -> int:
        return self._make(NodeKind.AND, left, right, t)

    def _or_at(self, t: int, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        return self._make(NodeKind.OR, a, b, t)

    def and_parts(self, t: int, left: int, right: int) -> int:
        """left ∧ right at t for left under left(t) and right under right(t)."""
        if left == self.false or right == self.false:
            return self.false
        if self.is_true(left) and self.is_true(right):
            return self.true
        if self.is_true(left):
            return right
        if self.is_true(right):
            return left
        return self._and_at(t, left, right)

    def lift(self, s: int, t: int) -> int:
        """An equivalent of s whose vtree node is t; s must lie under t."""
        vt = self.vtree
        ls = self._lam[s]
        if ls == t:
            return s
        if not vt.is_under(ls, t) or vt.is_leaf(t):
            raise ValueError(f"node {s} at vtree node {ls} cannot be lifted to {t}")
        left, right = vt.left[t], vt.right[t]
        if vt.is_under(ls, left):
            return self._and_at(t, s, self.const(1, right))
        return self._and_at(t, self.const(1, left), s)

    # Node accessors

    def kind(self, n: int) -> NodeKind:
        return NodeKind(self._kind[n])

    def children(self, n: int) -> tuple[int, ...]:
        if self._kind[n] < NodeKind.AND:
            return ()
        return (self._a[n], self._b[n])

    def lam(self, n: int) -> int:
        return self._lam[n]

    def literal_of(self, n: int) -> int:
        return self._a[n]

    def value_of(self, n: int) -> int:
        return self._a[n]

    def var_mask(self, n: int) -> int:
        return self._vars[n]

    def variables(self, n: int) -> frozenset[int]:
        mask = self._vars[n]
        return frozenset(v for v in self.vtree.leaves if mask >> v & 1)

    def is_const(self, n: int) -> bool:
        return self._kind[n] == NodeKind.CONST

    def is_true(self, n: int) -> bool:
        return self._kind[n] == NodeKind.CONST and self._a[n] == 1

    def is_false(self, n: int) -> bool:
        return self._kind[n] == NodeKind.CONST and self._a[n] == 0

    # Traversal and sizes

    def reachable(self, root: int) -> list[int]:
        """Node ids reachable from root, children before parents."""
        seen = {root}
        stack = [root]
        while stack:
            n = stack.pop()
            if self._kind[n] >= NodeKind.AND:
                for c in (self._a[n], self._b[n]):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return sorted(seen)

    def postorder(self, root: int) -> list[int]:
        """Reachable nodes in depth-first postorder, left child first."""
        order: list[int] = []
        seen: set[int] = set()
        stack: list[tuple[int, bool]] = [(root, False)]
        while stack:
            n, expanded = stack.pop()
            if expanded:
                order.append(n)
                continue
            if n in seen:
                continue
            seen.add(n)
            stack.append((n, True))
            if self._kind[n] >= NodeKind.AND:
                stack.append((self._b[n], False))
                stack.append((self._a[n], False))
        return order

    def edge_count(self, root: int) -> int:
        return sum(2 for n in self.reachable(root) if self._kind[n] >= NodeKind.AND)

    def node_count(self, root: int) -> int:
        return len(self.reachable(root))

    # Conjunction

    def conjoin(self, x: int, y: int) -> int:
        """x ∧ y; the memo table persists across calls."""
        if self.is_true(x):
            return y
        if self.is_true(y):
            return x
        before = self._created
        self._budget = None if self.limit is None else before + self.limit
        try:
            with deep_recursion():
                result = self._conj(x, y)
        finally:
            self._budget = None
        if self.strict:
            self._check_apply(x, y, result, self._created - before)
        return result

    def _check_apply(self, x: int, y: int, result: int, created: int) -> None:
        nodes_x, nodes_y = self.node_count(x), self.node_count(y)
        if created > nodes_x * nodes_y:
            raise InvariantViolation(
                "apply_node_bound", created=created, nodes_a=nodes_x, nodes_b=nodes_y
            )
        edges = self.edge_count(result)
        bound = apply_edge_bound(self.edge_count(x), self.edge_count(y))
        if edges > bound:
            raise InvariantViolation("apply_edge_bound", edges=edges, bound=bound)

    def _conj(self, x: int, y: int) -> int:
        # result is false or a node at join(lam(x), lam(y))
        if x == y:
            return x
        if x > y:
            x, y = y, x
        key = (x, y)
        hit = self._and_cache.get(key)
        if hit is not None:
            return hit
        result = self._conj_pair(x, y)
        self._and_cache[key] = result
        return result

    def _conj_pair(self, x: int, y: int) -> int:
        vt = self.vtree
        kx, ky = self._kind[x], self._kind[y]
        tx, ty = self._lam[x], self._lam[y]
        if kx == NodeKind.CONST or ky == NodeKind.CONST:
            if self.is_false(x) or self.is_false(y):
                return self.false
            if kx == NodeKind.CONST and ky == NodeKind.CONST:
                return self.const(1, vt.join(tx, ty))
            other = y if kx == NodeKind.CONST else x
            return self.lift(other, vt.join(tx, ty))
        if kx == NodeKind.OR or ky == NodeKind.OR:
            d, other = (x, y) if kx == NodeKind.OR else (y, x)
            first = self._conj(self._a[d], other)
            second = self._conj(self._b[d], other)
            return self._disjoin_aligned(vt.join(tx, ty), first, second)
        if tx == ty:
            if kx == NodeKind.LIT:
                # distinct literals at one leaf are complementary
                return self.false
            left = self._conj(self._a[x], self._a[y])
            if left == self.false:
                return self.false
            right = self._conj(self._b[x], self._b[y])
            if right == self.false:
                return self.false
            return self._and_node(tx, left, right)
        if vt.is_under(tx, ty) or vt.is_under(ty, tx):
            hi, lo = (y, x) if vt.is_under(tx, ty) else (x, y)
            t = self._lam[hi]
            if vt.is_under(self._lam[lo], vt.left[t]):
                left = self._conj(lo, self._a[hi])
                if left == self.false:
                    return self.false
                return self._and_node(t, left, self._b[hi])
            right = self._conj(lo, self._b[hi])
            if right == self.false:
                return self.false
            return self._and_node(t, self._a[hi], right)
        t = vt.lca(tx, ty)
        if vt.is_under(tx, vt.left[t]):
            return self._and_node(t, x, y)
        return self._and_node(t, y, x)

    def _and_node(self, t: int, left: int, right: int) -> int:
        if self.is_true(left) and self.is_true(right):
            return self.const(1, t)
        return self._and_at(t, left, right)

    def _disjoin_aligned(self, t: int, p: int, q: int) -> int:
        if p == self.false:
            return q
        if q == self.false or p == q:
            return p
        if self.is_true(p) or self.is_true(q):
            return self.const(1, t)
        return self._or_at(t, p, q)

    # Disjunction (used by clause and table compilation only)

    def disjoin(self, p: int, q: int) -> int:
        if p == self.false:
            return q
        if q == self.false or p == q:
            return p
        if self.is_true(p) or self.is_true(q):
            return self.true
        t = self.vtree.join(self._lam[p], self._lam[q])
        return self._or_at(t, self.lift(p, t), self.lift(q, t))

    # Conditioning

    def condition(self, root: int, a: Mapping[int, int]) -> int:
        """root|a, built bottom-up without growing the edge count."""
        amask = 0
        for var in a:
            amask |= 1 << var
        if self._vars[root] & amask == 0:
            return root
        out: dict[int, int] = {}
        for n in self.reachable(root):
            kind = self._kind[n]
            if self._vars[n] & amask == 0:
                out[n] = n
            elif kind == NodeKind.LIT:
                lit = self._a[n]
                out[n] = self.true if (a[abs(lit)] == 1) == (lit > 0) else self.false
            elif kind == NodeKind.AND:
                out[n] = self.and_parts(self._lam[n], out[self._a[n]], out[self._b[n]])
            else:
                out[n] = self._condition_or(self._lam[n], out[self._a[n]], out[self._b[n]])
        result = out[root]
        if self.strict:
            before, after = self.edge_count(root), self.edge_count(result)
            if after > before:
                raise InvariantViolation("condition_edges", before=before, after=after)
        return result

    def _condition_or(self, t: int, p: int, q: int) -> int:
        if self.is_true(p) or self.is_true(q):
            return self.true
        if p == self.false:
            return q
        if q == self.false or p == q:
            return p
        return self._or_at(t, self.lift(p, t), self.lift(q, t))

    # Transfer between managers

    def adopt(self, source: "DnnfManager", root: int) -> int:
        """Copy a circuit from another manager over an identical vtree."""
        if source is self:
            return root
        if source.vtree != self.vtree:
            raise VtreeMismatchError("cannot adopt a circuit over a different vtree")
        out: dict[int, int] = {}
        for n in source.reachable(root):
            kind, a, b = source._kind[n], source._a[n], source._b[n]
            if kind >= NodeKind.AND:
                a, b = out[a], out[b]
            out[n] = self._make(kind, a, b, source._lam[n])
        return out[root]


class ManagerPool:
    """One manager per distinct vtree within a run."""

    def __init__(self, *, limit: int | None = None, strict: bool = False):
        self.limit = limit
        self.strict = strict
        self._managers: dict[Vtree, DnnfManager] = {}

    def get(self, vtree: Vtree) -> DnnfManager:
        manager = self._managers.get(vtree)
        if manager is None:
            manager = DnnfManager(vtree, limit=self.limit, strict=self.strict)
            self._managers[vtree] = manager
            logger.debug("manager_created", vtree_nodes=vtree.node_count, managers=len(self))
        return manager

    def __len__(self) -> int:
        return len(self._managers)

    def __contains__(self, vtree: object) -> bool:
        return vtree in self._managers
