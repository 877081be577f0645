"""Refutation traces of Tseitin formulas and satisfiable witnesses inside them.

A refutation is a trace whose final circuit is the constant 0. Given a
refutation of T(G) whose last step conjoins Σℓ and Σr, and a bipartition
(A, B) of G with G[A] connected and G[B] 2-connected, an assignment to the
cut edges turns one side into a satisfiable Tseitin formula. The extractor
builds a circuit for that formula from Σℓ and Σr alone:

- when an operand misses at most two constraints of B, it is conditioned on
  the cut and on a model's A-internal edges, and the missing parity
  constraints are conjoined back;
- otherwise both operands are conditioned on a cut assignment falsifying
  one missing clause of each, and their A-side parts are conjoined.

A symmetric variant on A and an exhaustive search over cut assignments back
these up.
"""
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from itertools import product

import structlog

from sdnnf_lab.circuits.manager import apply_edge_bound
from sdnnf_lab.circuits.strdnnf import (
    StrDnnf,
    apply_and,
    compile_parity,
    condition,
    find_model,
    is_satisfiable,
)
from sdnnf_lab.compiler.conditioning import condition_trace
from sdnnf_lab.compiler.trace import CompilationTrace, StepKind
from sdnnf_lab.errors import (
    InvariantViolation,
    NotARefutation,
    PreconditionError,
    SearchBudgetExhausted,
)
from sdnnf_lab.graphs.charged_graph import ChargedGraph, VertexPartition
from sdnnf_lab.graphs.connectivity import (
    bodlaender_component,
    is_2connected,
    is_connected,
    one_separators,
)
from sdnnf_lab.graphs.tseitin import (
    components,
    constraint_clauses,
    incomplete_constraints,
    is_satisfiable_criterion,
    satisfiable_side,
    satisfying_assignment,
    side_graph,
    tseitin_cnf,
)
from sdnnf_lab.logic.oracle import DEFAULT_MAX_VARS, check_equivalent
from sdnnf_lab.models.reports import RefutationReport, WitnessCase, WitnessReport
from sdnnf_lab.partition.bipartition import Bipartition, PartitionSearch, lemma4_partition
from sdnnf_lab.partition.params import DEFAULT_PARAMS, PartitionParams
from sdnnf_lab.partition.treewidth import DEFAULT_MAX_VERTICES, treewidth

logger = structlog.get_logger(__name__)

SEARCH_MAX_CUT = 16


def require_refutation(t: CompilationTrace) -> None:
    if not t.steps or not t.final.is_false():
        raise NotARefutation("the final circuit of the trace is not the constant 0")


def refutation_report(t: CompilationTrace) -> RefutationReport:
    require_refutation(t)
    last = t.steps[-1]
    left = right = 0
    if last.kind == StepKind.APPLY:
        left, right = (t.steps[j].size for j in last.parents)
    return RefutationReport(
        steps=len(t),
        max_intermediate=t.max_intermediate,
        final_size=last.size,
        left_size=left,
        right_size=right,
    )


def _require_tseitin(t: CompilationTrace, g: ChargedGraph) -> None:
    if t.formula.clause_set() != tseitin_cnf(g).clause_set():
        raise PreconditionError("tseitin_formula", "trace does not compile T(G)")


def reduce_to_2connected(
    g: ChargedGraph,
    t: CompilationTrace,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> tuple[ChargedGraph, CompilationTrace]:
    """Cut G at 1-separators until 2-connected, conditioning the refutation along.

    Each round keeps the piece of G that carries its treewidth (the side A)
    and fixes the cut edges so that T(G_A) stays unsatisfiable while every
    component of G_B becomes satisfiable; a model of G_B completes the
    assignment. The result refutes T(G') with tw(G') = tw(G).
    """
    require_refutation(t)
    _require_tseitin(t, g)
    if not is_connected(g):
        raise PreconditionError("connected", "graph must be connected")
    if is_satisfiable_criterion(g):
        raise PreconditionError("unsatisfiable", "T(G) is satisfiable")
    rounds = 0
    while not is_2connected(g):
        separators = one_separators(g)
        if not separators:
            raise PreconditionError("two_connected", "graph has no 1-separator to cut at")
        u = separators[0]
        tw = treewidth(g, max_vertices)
        comp = bodlaender_component(g, u, lambda h: treewidth(h, max_vertices))
        a_side = comp | {u}
        b_side = frozenset(g.vertices) - a_side
        cut: dict[int, int] = {}
        for piece in components(g.induced(b_side)):
            edges = sorted(g.cut_edges({u}, piece), key=lambda e: e.id)
            for i, e in enumerate(edges):
                cut[e.var] = g.total_charge(piece) % 2 if i == 0 else 0
        rest = satisfying_assignment(side_graph(g, b_side, cut))
        t = condition_trace(t, cut | rest)
        g = side_graph(g, a_side, cut)
        if treewidth(g, max_vertices) != tw:
            raise InvariantViolation("treewidth_preserved", before=tw, after=treewidth(g, max_vertices))
        rounds += 1
        logger.debug("separator_removed", vertex=u, kept=len(a_side), dropped=len(b_side))
    _require_tseitin(t, g)
    logger.info("reduced_to_2connected", rounds=rounds, vertices=len(g.vertices))
    return g, t


@dataclass(frozen=True)
class Witness:
    side: str
    circuit: StrDnnf
    graph: ChargedGraph
    cut_assignment: dict[int, int]
    report: WitnessReport


@dataclass(frozen=True)
class _Part:
    """A circuit built for one side, with the composed apply bound on its size."""

    circuit: StrDnnf
    bound: int
    parity_conjoins: int = 0


class _Extraction:
    def __init__(self, t: CompilationTrace, g: ChargedGraph, partition: VertexPartition):
        self.g = g
        self.partition = partition
        left, right = t.last_apply()
        self.operands = (left.circuit, right.circuit)
        self.sizes = (left.size, right.size)
        j, k = t.steps[-1].parents
        supports = [t.supporting_cnf(i) for i in (j, k)]
        self.incomplete = tuple(incomplete_constraints(f, g) for f in supports)
        self.present = tuple(f.clause_set() for f in supports)
        self.cut = sorted(e.var for e in g.cut_edges(partition.a, partition.b))
        self.internal = {
            "A": frozenset(e.var for e in g.internal_edges(partition.a)),
            "B": frozenset(e.var for e in g.internal_edges(partition.b)),
        }

    def vertices(self, side: str) -> frozenset[int]:
        return self.partition.side(side)

    def other(self, side: str) -> str:
        return "B" if side == "A" else "A"

    def side_part(self, s: StrDnnf, a: Mapping[int, int], side: str) -> _Part | None:
        """s|a with the other side's internal edges fixed by one model; None if s|a is 0."""
        conditioned = condition(s, a)
        fixed = self.internal[self.other(side)]
        model = find_model(conditioned, conditioned.variables | fixed)
        if model is None:
            return None
        part = condition(conditioned, {v: model[v] for v in fixed})
        return _Part(part, s.size)

    def complete(self, part: _Part, a: Mapping[int, int], side: str, missing: Iterable[int]) -> _Part:
        """Conjoin the full parity constraint of every missing vertex."""
        h = side_graph(self.g, self.vertices(side), a)
        circuit, bound = part.circuit, part.bound
        conjoins = 0
        for v in sorted(missing):
            parity = compile_parity(circuit.manager, h.vars_of(v), h.charge[v])
            circuit = apply_and(circuit, parity)
            bound = apply_edge_bound(bound, parity.size)
            conjoins += 1
        return _Part(circuit, bound, part.parity_conjoins + conjoins)

    def few_incomplete(self, side: str) -> tuple[_Part, dict[int, int]] | None:
        """An operand missing at most two constraints of `side` yields that side."""
        side_vertices = self.vertices(side)
        order = sorted(range(2), key=lambda i: len(self.incomplete[i] & side_vertices))
        for i in order:
            missing = self.incomplete[i] & side_vertices
            if len(missing) > 2:
                continue
            s = self.operands[i]
            # side satisfiable iff the cut sum has the parity of its total charge
            target = self.g.total_charge(side_vertices) % 2
            guide = apply_and(s, compile_parity(s.manager, self.cut, target))
            model = find_model(guide, guide.variables | set(self.cut))
            if model is None:
                continue
            a = {v: model[v] for v in self.cut}
            part = self.side_part(s, a, side)
            if part is None:
                continue
            return self.complete(part, a, side, missing), a
        return None

    def many_incomplete(self) -> tuple[_Part, dict[int, int]] | None:
        """Both operands miss at least three constraints of B; side A is built."""
        b = self.vertices("B")
        inc_l, inc_r = (inc & b for inc in self.incomplete)
        cut = set(self.cut)
        for u in sorted(inc_r):
            others = sorted(inc_l - {u})
            if len(others) < 2:
                continue
            v, w = others[0], others[1]
            c_u = self._missing_clause(u, 1)
            e_u = {abs(lit) for lit in c_u if abs(lit) in cut}
            e_v = {abs(lit) for lit in self._missing_clause(v, 0) if abs(lit) in cut}
            partner = v if cut != e_u | e_v else w
            c_p = self._missing_clause(partner, 0)
            # falsify both clauses on the cut, then fix the parity of A
            a = {abs(lit): 0 if lit > 0 else 1 for lit in (*c_u, *c_p) if abs(lit) in cut}
            free = sorted(cut - set(a))
            ones = sum(a.values())
            need = (ones + self.g.total_charge(self.vertices("A"))) % 2
            if need and not free:
                continue
            for i, var in enumerate(free):
                a[var] = need if i == 0 else 0
            parts = [self.side_part(s, a, "A") for s in self.operands]
            if parts[0] is None or parts[1] is None:
                continue
            circuit = apply_and(parts[0].circuit, parts[1].circuit)
            return _Part(circuit, apply_edge_bound(parts[0].bound, parts[1].bound)), a
        return None

    def _missing_clause(self, v: int, operand: int) -> tuple[int, ...]:
        present = self.present[operand]
        for clause in constraint_clauses(self.g, v):
            if clause not in present:
                return clause
        raise InvariantViolation("missing_clause", vertex=v, operand=operand)

    def search(self, max_cut: int) -> tuple[_Part, dict[int, int], str] | None:
        """Try every cut assignment in order; the predicted side is built from both operands."""
        if len(self.cut) > max_cut:
            raise SearchBudgetExhausted("witness_search", 0)
        for bits in product((0, 1), repeat=len(self.cut)):
            a = dict(zip(self.cut, bits, strict=True))
            side = satisfiable_side(self.g, self.partition, a)
            parts = [self.side_part(s, a, side) for s in self.operands]
            if parts[0] is None or parts[1] is None:
                continue
            circuit = apply_and(parts[0].circuit, parts[1].circuit)
            return _Part(circuit, apply_edge_bound(parts[0].bound, parts[1].bound)), a, side
        return None


def _check_preconditions(
    t: CompilationTrace,
    g: ChargedGraph,
    partition: VertexPartition,
    max_vertices: int,
) -> None:
    require_refutation(t)
    if t.steps[-1].kind != StepKind.APPLY:
        raise PreconditionError("last_step_apply", "the last step must be an apply")
    _require_tseitin(t, g)
    checks = [
        ("two_connected", is_2connected(g), "G must be 2-connected"),
        ("partition_covers", partition.covers(g) and bool(partition.a) and bool(partition.b),
         "(A, B) must split the vertices into two nonempty blocks"),
        ("a_connected", is_connected(g, partition.a), "G[A] must be connected"),
        ("b_2connected", is_2connected(g.induced(partition.b)), "G[B] must be 2-connected"),
    ]
    for condition_name, ok, message in checks:
        if not ok:
            raise PreconditionError(condition_name, message)
    for name in ("a", "b"):
        width = treewidth(g.induced(getattr(partition, name)), max_vertices)
        if width < 2:
            raise PreconditionError(f"treewidth_{name}", f"tw(G[{name.upper()}]) = {width} < 2")


def extract_satisfiable_witness(
    t: CompilationTrace,
    g: ChargedGraph,
    partition: VertexPartition,
    *,
    max_vars: int = DEFAULT_MAX_VARS,
    samples: int = 100_000,
    seed: int = 0,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    search_max_cut: int = SEARCH_MAX_CUT,
) -> Witness:
    """A circuit for a satisfiable T(G_side, c^a) built from the last two operands."""
    _check_preconditions(t, g, partition, max_vertices)
    ex = _Extraction(t, g, partition)

    found: tuple[_Part, dict[int, int], str] | None = None
    case = WitnessCase.FEW_INCOMPLETE_B
    b_counts = [len(inc & partition.b) for inc in ex.incomplete]
    if min(b_counts) <= 2:
        hit = ex.few_incomplete("B")
        found = (hit[0], hit[1], "B") if hit is not None else None
    else:
        case = WitnessCase.MANY_INCOMPLETE_B
        many = ex.many_incomplete()
        found = (many[0], many[1], "A") if many is not None else None
    if found is None:
        logger.warning("witness_case_failed", case=case.value, incomplete_b=b_counts)
        case = WitnessCase.FEW_INCOMPLETE_A
        hit = ex.few_incomplete("A")
        found = (hit[0], hit[1], "A") if hit is not None else None
    if found is None:
        logger.warning("witness_case_failed", case=case.value)
        case = WitnessCase.SEARCH
        found = ex.search(search_max_cut)
    if found is None:
        raise SearchBudgetExhausted("witness_search", 1 << len(ex.cut))

    part, a, side = found
    h = side_graph(g, partition.side(side), a)
    verdict = check_equivalent(
        part.circuit, tseitin_cnf(h), h.variables, max_vars=max_vars, samples=samples, seed=seed
    )
    if not verdict:
        raise InvariantViolation(
            "witness_equivalence", side=side, counterexample=verdict.counterexample
        )
    satisfiable = is_satisfiable(part.circuit)
    predicted = satisfiable_side(g, partition, a) == side
    if satisfiable != predicted or not satisfiable:
        raise InvariantViolation("witness_parity", satisfiable=satisfiable, predicted=predicted)
    if part.circuit.size > part.bound:
        raise InvariantViolation("witness_size", size=part.circuit.size, bound=part.bound)
    report = WitnessReport(
        side=side,
        case=case,
        satisfiable=satisfiable,
        predicted_satisfiable=predicted,
        oracle_verified=verdict.equal,
        verification_method=verdict.method,
        size=part.circuit.size,
        left_size=ex.sizes[0],
        right_size=ex.sizes[1],
        apply_bound=part.bound,
        parity_conjoins=part.parity_conjoins,
        vertices=sorted(h.vertices),
        charges=dict(h.charge),
        cut_assignment=dict(sorted(a.items())),
    )
    logger.info(
        "witness_extracted",
        side=side,
        case=case.value,
        size=report.size,
        apply_bound=report.apply_bound,
        method=verdict.method,
    )
    return Witness(side, part.circuit, h, dict(a), report)


def find_witness(
    g: ChargedGraph,
    t: CompilationTrace,
    params: PartitionParams = DEFAULT_PARAMS,
    search: PartitionSearch | None = None,
    *,
    max_vars: int = DEFAULT_MAX_VARS,
    samples: int = 100_000,
    seed: int = 0,
) -> tuple[ChargedGraph, Bipartition, Witness]:
    """Reduce to a 2-connected graph, partition it, and extract a witness."""
    search = search or PartitionSearch(seed=seed)
    reduced, trace = reduce_to_2connected(g, t, search.max_vertices)
    split = lemma4_partition(reduced, params, search)
    witness = extract_satisfiable_witness(
        trace,
        reduced,
        split.partition,
        max_vars=max_vars,
        samples=samples,
        seed=seed,
        max_vertices=search.max_vertices,
    )
    return reduced, split, witness
