"""Binary variable trees (vtrees) and the shapes the compiler can ask for.

Nodes are numbered in preorder, so the root is node 0 and the subtree of a
node `t` is the id interval ``[t, t + size(t))``. Structural equality (shape,
child order and leaf labels) is plain dataclass equality.
"""
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from sdnnf_lab.errors import FormatError

Nested = int | tuple["Nested", "Nested"]


class VtreeShape(str, Enum):
    """Vtree construction strategies."""
    LINEAR = "linear"
    BALANCED = "balanced"
    RANDOM = "random"


@dataclass(frozen=True, slots=True)
class Vtree:
    """A vtree in preorder arrays: `left`/`right` are -1 and `var` > 0 at leaves."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    var: tuple[int, ...]
    parent: tuple[int, ...] = field(init=False, repr=False, compare=False)
    size: tuple[int, ...] = field(init=False, repr=False, compare=False)
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)
    leaves: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.var)
        if n == 0 or len(self.left) != n or len(self.right) != n:
            raise ValueError("vtree arrays must be nonempty and aligned")
        parent = [-1] * n
        size = [0] * n
        masks = [0] * n
        leaves: dict[int, int] = {}
        # children follow their parent in preorder, so a reverse sweep is bottom-up
        for t in range(n - 1, -1, -1):
            left, right, var = self.left[t], self.right[t], self.var[t]
            if left == -1 and right == -1:
                if var <= 0 or var in leaves:
                    raise ValueError(f"leaf {t} has an invalid or repeated variable {var}")
                leaves[var] = t
                size[t] = 1
                masks[t] = 1 << var
                continue
            if var != 0 or left != t + 1 or not (t < right < n):
                raise ValueError(f"node {t} breaks the preorder layout")
            if right != left + size[left]:
                raise ValueError(f"node {t} breaks the preorder layout")
            parent[left] = parent[right] = t
            size[t] = 1 + size[left] + size[right]
            masks[t] = masks[left] | masks[right]
        if size[0] != n:
            raise ValueError("vtree arrays do not form a single tree")
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "size", tuple(size))
        object.__setattr__(self, "masks", tuple(masks))
        object.__setattr__(self, "leaves", leaves)

    @property
    def root(self) -> int:
        return 0

    @property
    def node_count(self) -> int:
        return len(self.var)

    @property
    def variables(self) -> frozenset[int]:
        return self.vars_below(0)

    def is_leaf(self, t: int) -> bool:
        return self.left[t] == -1

    def leaf_of(self, var: int) -> int:
        try:
            return self.leaves[var]
        except KeyError:
            raise ValueError(f"variable {var} is not a leaf of this vtree") from None

    def vars_below(self, t: int) -> frozenset[int]:
        """var(t): the leaf labels of the subtree rooted at t."""
        mask = self.masks[t]
        return frozenset(v for v in self.leaves if mask >> v & 1)

    def is_under(self, t: int, s: int) -> bool:
        """True when t lies in the subtree rooted at s (t == s included)."""
        return s <= t < s + self.size[s]

    def lca(self, a: int, b: int) -> int:
        while not self.is_under(b, a):
            a = self.parent[a]
        return a

    def join(self, a: int, b: int) -> int:
        """The lowest node having both a and b in its subtree."""
        if self.is_under(b, a):
            return a
        if self.is_under(a, b):
            return b
        return self.lca(a, b)

    def depth(self, t: int) -> int:
        d = 0
        while t != 0:
            t = self.parent[t]
            d += 1
        return d

    def height(self) -> int:
        return max(self.depth(t) for t in range(self.node_count))

    def to_nested(self, t: int = 0) -> Nested:
        if self.is_leaf(t):
            return self.var[t]
        return (self.to_nested(self.left[t]), self.to_nested(self.right[t]))

    @classmethod
    def from_nested(cls, nested: Nested) -> "Vtree":
        left: list[int] = []
        right: list[int] = []
        var: list[int] = []

        def visit(node: Nested) -> int:
            t = len(var)
            left.append(-1)
            right.append(-1)
            if isinstance(node, int):
                var.append(node)
                return t
            var.append(0)
            left[t] = visit(node[0])
            right[t] = visit(node[1])
            return t

        visit(nested)
        return cls(tuple(left), tuple(right), tuple(var))

    def dumps(self) -> str:
        """Text form: header, then nodes children-first so the root comes last."""
        lines = [f"vtree {self.node_count}"]
        for t in _postorder(self):
            if self.is_leaf(t):
                lines.append(f"L {t} {self.var[t]}")
            else:
                lines.append(f"I {t} {self.left[t]} {self.right[t]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Vtree":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("c")]
        if not lines or len(lines[0]) != 2 or lines[0][0] != "vtree":
            raise FormatError("vtree", "missing 'vtree <count>' header", 1)
        try:
            count = int(lines[0][1])
            left, right, var = [-2] * count, [-2] * count, [-2] * count
            for lineno, parts in enumerate(lines[1:], start=2):
                t = int(parts[1])
                if not 0 <= t < count or var[t] != -2:
                    raise FormatError("vtree", f"bad or repeated node id {t}", lineno)
                if parts[0] == "L" and len(parts) == 3:
                    left[t], right[t], var[t] = -1, -1, int(parts[2])
                elif parts[0] == "I" and len(parts) == 4:
                    left[t], right[t], var[t] = int(parts[2]), int(parts[3]), 0
                else:
                    raise FormatError("vtree", f"bad node line {' '.join(parts)!r}", lineno)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("vtree", str(exc)) from exc
        if len(lines) - 1 != count:
            raise FormatError("vtree", f"header announces {count} nodes, found {len(lines) - 1}")
        try:
            return cls(tuple(left), tuple(right), tuple(var))
        except ValueError as exc:
            raise FormatError("vtree", str(exc)) from exc


def _postorder(t: Vtree) -> list[int]:
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded or t.is_leaf(node):
            order.append(node)
            continue
        stack.append((node, True))
        stack.append((t.right[node], False))
        stack.append((t.left[node], False))
    return order


def _catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def _linear(vs: Sequence[int]) -> Nested:
    nested: Nested = vs[-1]
    for v in reversed(vs[:-1]):
        nested = (v, nested)
    return nested


def _balanced(vs: Sequence[int]) -> Nested:
    if len(vs) == 1:
        return vs[0]
    mid = len(vs) // 2
    return (_balanced(vs[:mid]), _balanced(vs[mid:]))


def _random(vs: Sequence[int], rng: np.random.Generator) -> Nested:
    # left subtree with k leaves is weighted by the number of shapes on each side
    n = len(vs)
    if n == 1:
        return vs[0]
    weights = [_catalan(k - 1) * _catalan(n - k - 1) for k in range(1, n)]
    total = sum(weights)
    k = 1 + int(rng.choice(n - 1, p=[w / total for w in weights]))
    return (_random(vs[:k], rng), _random(vs[k:], rng))


def build(vars: Iterable[int], shape: VtreeShape, seed: int | None = None) -> Vtree:
    """Build a vtree over `vars` (leaves in the given order)."""
    vs = list(vars)
    if not vs:
        raise ValueError("a vtree needs at least one variable")
    if len(set(vs)) != len(vs):
        raise ValueError("vtree variables must be distinct")
    match VtreeShape(shape):
        case VtreeShape.LINEAR:
            nested = _linear(vs)
        case VtreeShape.BALANCED:
            nested = _balanced(vs)
        case VtreeShape.RANDOM:
            if seed is None:
                raise ValueError("random vtrees need a seed")
            nested = _random(vs, np.random.default_rng(seed))
    return Vtree.from_nested(nested)


def same_vtree(a: Vtree, b: Vtree) -> bool:
    return a == b
