"""Structured DNNF circuits: construction, Apply, conditioning, restructuring, queries.

A `StrDnnf` is a root node inside a `DnnfManager`; the manager fixes the
vtree. Circuits are immutable values, every operation returns a new root.
The size of a circuit is its number of edges.
"""
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np
import structlog

from sdnnf_lab.circuits.manager import DnnfManager, NodeKind, deep_recursion
from sdnnf_lab.errors import (
    InvariantViolation,
    OracleLimitError,
    PreconditionError,
    VtreeMismatchError,
)
from sdnnf_lab.logic.cnf import Clause
from sdnnf_lab.logic.oracle import (
    BoolArray,
    TruthTable,
    assignment_at,
    count_models,
    table_of,
)
from sdnnf_lab.logic.vtree import Vtree
from sdnnf_lab.models.reports import CircuitCondition, CircuitValidation

logger = structlog.get_logger(__name__)

PARITY_EDGES_PER_VAR = 12
PARITY_NODES_PER_VAR = 8


@dataclass(frozen=True, slots=True)
class StrDnnf:
    manager: DnnfManager
    root: int

    @property
    def vtree(self) -> Vtree:
        return self.manager.vtree

    @property
    def variables(self) -> frozenset[int]:
        return self.manager.variables(self.root)

    @property
    def size(self) -> int:
        """Number of edges."""
        return self.manager.edge_count(self.root)

    @property
    def node_count(self) -> int:
        return self.manager.node_count(self.root)

    def is_false(self) -> bool:
        return self.manager.is_false(self.root)

    def is_true(self) -> bool:
        return self.manager.is_true(self.root)

    def evaluate(self, a: Mapping[int, int]) -> bool:
        return evaluate(self, a)

    def evaluate_many(self, columns: Mapping[int, BoolArray], rows: int) -> BoolArray:
        return evaluate_many(self, columns, rows)


def false_circuit(manager: DnnfManager) -> StrDnnf:
    return StrDnnf(manager, manager.false)


def true_circuit(manager: DnnfManager) -> StrDnnf:
    return StrDnnf(manager, manager.true)


def literal_circuit(manager: DnnfManager, lit: int) -> StrDnnf:
    return StrDnnf(manager, manager.literal(lit))


def validate(s: StrDnnf) -> CircuitValidation:
    """Check every reachable node; the first violation (lowest node id) is reported."""
    m, vt = s.manager, s.vtree
    for n in m.reachable(s.root):
        kind, lam = m.kind(n), m.lam(n)
        if not 0 <= lam < vt.node_count:
            return _violation(n, CircuitCondition.LAMBDA_VARS, f"vtree node {lam} does not exist")
        mask = m.var_mask(n)
        if mask & ~vt.masks[lam]:
            return _violation(
                n, CircuitCondition.LAMBDA_VARS, f"var(s) is not contained in var({lam})"
            )
        if kind == NodeKind.LIT:
            if vt.leaves.get(abs(m.literal_of(n))) != lam:
                return _violation(
                    n, CircuitCondition.LAMBDA_LITERAL, "literal is not at its variable's leaf"
                )
            continue
        if kind == NodeKind.CONST:
            continue
        children = m.children(n)
        if len(children) != 2:
            return _violation(n, CircuitCondition.FAN_IN, "internal nodes need two children")
        a, b = children
        if a >= n or b >= n:
            return _violation(n, CircuitCondition.ACYCLIC, "child id is not below its parent")
        if kind == NodeKind.AND and m.var_mask(a) & m.var_mask(b):
            return _violation(n, CircuitCondition.DECOMPOSABLE, "children share variables")
        if a == b:
            return _violation(n, CircuitCondition.PARALLEL_EDGES, "both edges reach one child")
        if kind == NodeKind.AND:
            if vt.is_leaf(lam):
                return _violation(n, CircuitCondition.LAMBDA_AND, "AND node mapped to a leaf")
            if not (vt.is_under(m.lam(a), vt.left[lam]) and vt.is_under(m.lam(b), vt.right[lam])):
                return _violation(
                    n, CircuitCondition.LAMBDA_AND, "children are not under distinct children"
                )
        elif m.lam(a) != lam or m.lam(b) != lam:
            return _violation(
                n, CircuitCondition.LAMBDA_OR, "children carry a different vtree node"
            )
    return CircuitValidation(ok=True)


def _violation(node: int, condition: CircuitCondition, message: str) -> CircuitValidation:
    return CircuitValidation(ok=False, node=node, condition=condition, message=message)


def _check_vars(vars: Iterable[int], t: Vtree, what: str) -> None:
    outside = set(vars) - t.variables
    if outside:
        raise PreconditionError(what, f"variables {sorted(outside)} are not in the vtree")


def compile_clause(manager: DnnfManager, clause: Clause) -> StrDnnf:
    """A circuit for one clause; the empty clause gives constant 0."""
    vt = manager.vtree
    _check_vars((abs(lit) for lit in clause), vt, "clause_vars")
    by_var = {abs(lit): lit for lit in clause}

    def build(t: int, vars: list[int]) -> int:
        if vt.is_leaf(t):
            return manager.literal(by_var[vt.var[t]])
        left = [v for v in vars if vt.is_under(vt.leaves[v], vt.left[t])]
        right = [v for v in vars if not vt.is_under(vt.leaves[v], vt.left[t])]
        if not right:
            return build(vt.left[t], left)
        if not left:
            return build(vt.right[t], right)
        return manager.disjoin(build(vt.left[t], left), build(vt.right[t], right))

    if not clause:
        return false_circuit(manager)
    return StrDnnf(manager, build(vt.root, sorted(by_var)))


def compile_parity(manager: DnnfManager, vars: Iterable[int], parity: int) -> StrDnnf:
    """A circuit for sum(vars) = parity mod 2.

    Each vtree node joining two branches of the Steiner tree of `vars` keeps an
    (even, odd) pair built from two OR-of-AND gadgets.
    """
    vt = manager.vtree
    support = sorted(set(vars))
    _check_vars(support, vt, "parity_vars")
    if not support:
        return true_circuit(manager) if parity % 2 == 0 else false_circuit(manager)

    def build(t: int, vs: list[int]) -> tuple[int, int]:
        if vt.is_leaf(t):
            v = vt.var[t]
            return manager.literal(-v), manager.literal(v)
        left = [v for v in vs if vt.is_under(vt.leaves[v], vt.left[t])]
        right = [v for v in vs if not vt.is_under(vt.leaves[v], vt.left[t])]
        if not right:
            return build(vt.left[t], left)
        if not left:
            return build(vt.right[t], right)
        even_l, odd_l = build(vt.left[t], left)
        even_r, odd_r = build(vt.right[t], right)
        even = manager.disjoin(
            manager.and_parts(t, even_l, even_r), manager.and_parts(t, odd_l, odd_r)
        )
        odd = manager.disjoin(
            manager.and_parts(t, even_l, odd_r), manager.and_parts(t, odd_l, even_r)
        )
        return even, odd

    even, odd = build(vt.root, support)
    result = StrDnnf(manager, odd if parity % 2 else even)
    if manager.strict:
        if result.size > PARITY_EDGES_PER_VAR * len(support):
            raise InvariantViolation("parity_edges", edges=result.size, variables=len(support))
        if result.node_count > PARITY_NODES_PER_VAR * len(support):
            raise InvariantViolation(
                "parity_nodes", nodes=result.node_count, variables=len(support)
            )
    return result


def apply_and(a: StrDnnf, b: StrDnnf) -> StrDnnf:
    """a ∧ b over a shared vtree."""
    if a.manager is not b.manager:
        if a.vtree != b.vtree:
            raise VtreeMismatchError("apply needs both circuits on the same vtree")
        return StrDnnf(a.manager, a.manager.conjoin(a.root, a.manager.adopt(b.manager, b.root)))
    return StrDnnf(a.manager, a.manager.conjoin(a.root, b.root))


def condition(s: StrDnnf, a: Mapping[int, int]) -> StrDnnf:
    """s|a on the same vtree; the edge count never grows."""
    return StrDnnf(s.manager, s.manager.condition(s.root, a))


def restructure(s: StrDnnf, target: DnnfManager, max_vars: int = 20) -> StrDnnf:
    """An equivalent circuit respecting the target manager's vtree.

    Functions over at most `max_vars` variables are split through their truth
    table: at a vtree node with left variables L the distinct rows of the
    (L, R) table are the subs and the row classes are the primes. Larger
    functions are split by conditioning the source circuit on every
    L-assignment and grouping the results by node identity.
    """
    if not s.variables <= target.vtree.variables:
        raise PreconditionError("restructure_vars", "target vtree misses circuit variables")
    if target is s.manager:
        return s
    builder = _TableCompiler(target)
    if len(s.variables) <= max_vars:
        table = table_of(s, s.variables, max_vars)
        with deep_recursion():
            root = builder.compile(target.vtree.root, table)
    else:
        with deep_recursion():
            root = _compile_by_conditioning(s, builder, target.vtree.root, s.root, max_vars)
    logger.debug("circuit_restructured", size_before=s.size, size_after=target.edge_count(root))
    return StrDnnf(target, root)


def compile_table(manager: DnnfManager, table: TruthTable) -> StrDnnf:
    """A circuit for an explicit truth table."""
    _check_vars(table.universe, manager.vtree, "table_vars")
    with deep_recursion():
        return StrDnnf(manager, _TableCompiler(manager).compile(manager.vtree.root, table))


def split_table(table: TruthTable, left: tuple[int, ...], right: tuple[int, ...]) -> BoolArray:
    """The table as a matrix with one row per left assignment."""
    n = len(table.universe)
    cube = table.bits.reshape((2,) * n)
    axis = {v: n - 1 - j for j, v in enumerate(table.universe)}
    order = [axis[v] for v in reversed(left)] + [axis[v] for v in reversed(right)]
    return cube.transpose(order).reshape(1 << len(left), 1 << len(right))


class _TableCompiler:
    def __init__(self, manager: DnnfManager):
        self.manager = manager
        self._memo: dict[tuple[int, tuple[int, ...], bytes], int] = {}

    def _sides(self, t: int, vars: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        vt = self.manager.vtree
        left = vt.left[t]
        lvars = tuple(v for v in vars if vt.is_under(vt.leaves[v], left))
        rvars = tuple(v for v in vars if not vt.is_under(vt.leaves[v], left))
        return lvars, rvars

    def compile(self, t: int, table: TruthTable) -> int:
        m, vt = self.manager, self.manager.vtree
        if not table.bits.any():
            return m.false
        if table.bits.all():
            return m.true
        key = (t, table.universe, table.bits.tobytes())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if vt.is_leaf(t):
            (var,) = table.universe
            result = m.literal(var if table.bits[1] else -var)
        else:
            lvars, rvars = self._sides(t, table.universe)
            if not rvars:
                result = self.compile(vt.left[t], table)
            elif not lvars:
                result = self.compile(vt.right[t], table)
            else:
                matrix = split_table(table, lvars, rvars)
                rows, inverse = np.unique(matrix, axis=0, return_inverse=True)
                inverse = inverse.reshape(-1)
                result = m.false
                for i, row in enumerate(rows):
                    if not row.any():
                        continue
                    prime = self.compile(vt.left[t], TruthTable(lvars, inverse == i))
                    sub = self.compile(vt.right[t], TruthTable(rvars, np.array(row)))
                    result = m.disjoin(result, m.and_parts(t, prime, sub))
        self._memo[key] = result
        return result


def _compile_by_conditioning(
    s: StrDnnf, builder: _TableCompiler, t: int, node: int, max_vars: int
) -> int:
    source, target = s.manager, builder.manager
    vt = target.vtree
    vars = source.variables(node)
    if len(vars) <= max_vars:
        return builder.compile(t, table_of(StrDnnf(source, node), vars, max_vars))
    lvars, rvars = builder._sides(t, sorted(vars))
    if not rvars:
        return _compile_by_conditioning(s, builder, vt.left[t], node, max_vars)
    if not lvars:
        return _compile_by_conditioning(s, builder, vt.right[t], node, max_vars)
    if len(lvars) > max_vars:
        raise OracleLimitError(len(lvars), max_vars)
    groups: dict[int, list[int]] = {}
    for i in range(1 << len(lvars)):
        sub = source.condition(node, assignment_at(lvars, i))
        if sub != source.false:
            groups.setdefault(sub, []).append(i)
    result = target.false
    for sub, rows in groups.items():
        bits = np.zeros(1 << len(lvars), dtype=np.bool_)
        bits[rows] = True
        prime = builder.compile(vt.left[t], TruthTable(lvars, bits))
        if source.is_true(sub):
            part = target.true
        else:
            part = _compile_by_conditioning(s, builder, vt.right[t], sub, max_vars)
        result = target.disjoin(result, target.and_parts(t, prime, part))
    return result


def satisfiable_marks(s: StrDnnf) -> dict[int, bool]:
    m = s.manager
    marks: dict[int, bool] = {}
    for n in m.reachable(s.root):
        match m.kind(n):
            case NodeKind.CONST:
                marks[n] = m.value_of(n) == 1
            case NodeKind.LIT:
                marks[n] = True
            case NodeKind.AND:
                a, b = m.children(n)
                marks[n] = marks[a] and marks[b]
            case NodeKind.OR:
                a, b = m.children(n)
                marks[n] = marks[a] or marks[b]
    return marks


def is_satisfiable(s: StrDnnf) -> bool:
    return satisfiable_marks(s)[s.root]


def find_model(s: StrDnnf, universe: Iterable[int] | None = None) -> dict[int, int] | None:
    """One satisfying assignment, or None; unconstrained variables are set to 0."""
    marks = satisfiable_marks(s)
    if not marks[s.root]:
        return None
    m = s.manager
    model = dict.fromkeys(sorted(universe if universe is not None else s.variables), 0)
    stack = [s.root]
    while stack:
        n = stack.pop()
        match m.kind(n):
            case NodeKind.LIT:
                lit = m.literal_of(n)
                model[abs(lit)] = 1 if lit > 0 else 0
            case NodeKind.AND:
                stack.extend(m.children(n))
            case NodeKind.OR:
                a, b = m.children(n)
                stack.append(a if marks[a] else b)
    return model


def evaluate(s: StrDnnf, a: Mapping[int, int]) -> bool:
    """Evaluate under an assignment total on var(s)."""
    m = s.manager
    value: dict[int, bool] = {}
    for n in m.reachable(s.root):
        match m.kind(n):
            case NodeKind.CONST:
                value[n] = m.value_of(n) == 1
            case NodeKind.LIT:
                lit = m.literal_of(n)
                value[n] = (a[abs(lit)] == 1) == (lit > 0)
            case NodeKind.AND:
                x, y = m.children(n)
                value[n] = value[x] and value[y]
            case NodeKind.OR:
                x, y = m.children(n)
                value[n] = value[x] or value[y]
    return value[s.root]


def evaluate_many(s: StrDnnf, columns: Mapping[int, BoolArray], rows: int) -> BoolArray:
    """Vectorized evaluation; node columns are dropped after their last use."""
    m = s.manager
    order = m.reachable(s.root)
    uses: dict[int, int] = dict.fromkeys(order, 0)
    for n in order:
        for c in m.children(n):
            uses[c] += 1
    value: dict[int, BoolArray] = {}
    for n in order:
        match m.kind(n):
            case NodeKind.CONST:
                value[n] = np.full(rows, m.value_of(n) == 1, dtype=np.bool_)
            case NodeKind.LIT:
                lit = m.literal_of(n)
                col = columns[abs(lit)]
                value[n] = col if lit > 0 else ~col
            case kind:
                x, y = m.children(n)
                value[n] = value[x] & value[y] if kind == NodeKind.AND else value[x] | value[y]
                for c in (x, y):
                    uses[c] -= 1
                    if uses[c] == 0:
                        del value[c]
    return value[s.root]


def enumerate_models(s: StrDnnf, universe: Iterable[int], max_vars: int = 24) -> list[dict[int, int]]:
    """All models over the universe, in oracle row order."""
    order = tuple(sorted(universe))
    table = table_of(s, order, max_vars)
    return [assignment_at(order, int(i)) for i in np.flatnonzero(table.bits)]


def model_count(s: StrDnnf, universe: Iterable[int], max_vars: int = 20) -> int:
    return count_models(s, universe, max_vars)
