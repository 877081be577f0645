"""Bottom-up compilation of CNFs into str-DNNF(∧, r) traces and trace validation."""
import time
from collections.abc import Mapping

import structlog

from sdnnf_lab.circuits.manager import ManagerPool
from sdnnf_lab.circuits.strdnnf import (
    StrDnnf,
    apply_and,
    compile_clause,
    restructure,
    validate,
)
from sdnnf_lab.compiler.strategies import clause_groups, reduce
from sdnnf_lab.compiler.trace import CompilationTrace, StepKind, TraceStep
from sdnnf_lab.errors import (
    InvariantViolation,
    LabError,
    PreconditionError,
    ResourceLimitExceeded,
)
from sdnnf_lab.logic import vtree as vtrees
from sdnnf_lab.logic.cnf import Cnf
from sdnnf_lab.logic.oracle import (
    DEFAULT_MAX_VARS,
    BoolArray,
    Equivalence,
    Evaluable,
    check_equivalent,
)
from sdnnf_lab.models.reports import TraceRule, TraceValidation
from sdnnf_lab.models.strategy import Strategy

logger = structlog.get_logger(__name__)

DEFAULT_LIMIT = 2**22
DEFAULT_SAMPLES = 100_000


class _Run:
    """Mutable state of one compilation: the trace and the edge ceiling."""

    def __init__(self, trace: CompilationTrace, limit: int | None, strict: bool):
        self.trace = trace
        self.limit = limit
        self.strict = strict

    def add(self, step: TraceStep) -> int:
        if self.strict:
            check = validate(step.circuit)
            if not check:
                raise InvariantViolation(
                    "circuit_valid", step=len(self.trace), node=check.node, message=check.message
                )
        i = self.trace.add(step)
        if self.limit is not None and step.size > self.limit:
            raise ResourceLimitExceeded(step.size, self.limit)
        return i

    def conjoin(self, j: int, k: int) -> int:
        steps = self.trace.steps
        circuit = apply_and(steps[j].circuit, steps[k].circuit)
        return self.add(
            TraceStep(
                StepKind.APPLY,
                circuit,
                steps[j].vtree_id,
                parents=(j, k),
                support=steps[j].support | steps[k].support,
            )
        )

    def size(self, i: int) -> int:
        return self.trace.steps[i].size


def compile_cnf(
    f: Cnf,
    strategy: Strategy | None = None,
    *,
    limit: int | None = DEFAULT_LIMIT,
    strict: bool = True,
    verify: bool = True,
    oracle_max_vars: int = DEFAULT_MAX_VARS,
    samples: int = DEFAULT_SAMPLES,
    sample_seed: int = 0,
    pool: ManagerPool | None = None,
) -> CompilationTrace:
    """Compile f clause by clause; an edge ceiling hit returns the partial trace."""
    strategy = strategy or Strategy()
    if not f.clauses:
        raise PreconditionError("nonempty_formula", "formula has no clauses")
    if not f.universe:
        raise PreconditionError("nonempty_universe", "formula has no variables")
    started = time.perf_counter()
    pool = pool or ManagerPool(limit=limit, strict=strict)
    vt = vtrees.build(sorted(f.universe), strategy.vtree_shape, seed=strategy.seed)
    manager = pool.get(vt)
    trace = CompilationTrace(f, strategy=strategy.name)
    vid = trace.vtree_id(vt)
    run = _Run(trace, limit, strict)
    try:
        circuits = [compile_clause(manager, clause) for clause in f.clauses]
        groups = clause_groups(
            f.clauses, strategy.clause_order, [c.size for c in circuits], strategy.seed
        )
        step_of: dict[int, int] = {}
        for group in groups:
            for idx in group:
                step_of[idx] = run.add(
                    TraceStep(
                        StepKind.CLAUSE,
                        circuits[idx],
                        vid,
                        clause=idx,
                        support=frozenset({idx}),
                    )
                )
        partial = [
            reduce([step_of[i] for i in group], strategy.apply_order, run.conjoin, run.size)
            for group in groups
        ]
        last = reduce(partial, strategy.apply_order, run.conjoin, run.size)
        if strategy.restructure_to is not None:
            _restructure_final(run, pool, last, strategy, oracle_max_vars)
    except ResourceLimitExceeded as exc:
        trace.aborted = True
        logger.warning(
            "compile_aborted", steps=len(trace), size=exc.size, limit=exc.limit
        )
    trace.millis = int((time.perf_counter() - started) * 1000)
    if verify and not trace.aborted:
        trace.verification = _verify_final(trace, oracle_max_vars, samples, sample_seed)
    logger.info(
        "compile_finished",
        strategy=trace.strategy,
        steps=len(trace),
        max_intermediate=trace.max_intermediate,
        final_size=trace.final_size,
        aborted=trace.aborted,
        millis=trace.millis,
    )
    return trace


def _restructure_final(
    run: _Run, pool: ManagerPool, last: int, strategy: Strategy, max_vars: int
) -> None:
    assert strategy.restructure_to is not None
    trace = run.trace
    universe = sorted(trace.formula.universe)
    target = vtrees.build(universe, strategy.restructure_to, seed=strategy.seed + 1)
    source = trace.steps[last]
    if target == trace.vtrees[source.vtree_id]:
        logger.info("restructure_skipped", reason="target vtree equals the working vtree")
        return
    circuit = restructure(source.circuit, pool.get(target), max_vars)
    run.add(
        TraceStep(
            StepKind.RESTRUCTURE,
            circuit,
            trace.vtree_id(target),
            parents=(last,),
            support=source.support,
        )
    )


def _verify_final(
    trace: CompilationTrace, max_vars: int, samples: int, seed: int
) -> Equivalence:
    verdict = check_equivalent(
        trace.final, trace.formula, trace.formula.universe,
        max_vars=max_vars, samples=samples, seed=seed,
    )
    if not verdict:
        raise InvariantViolation(
            "compile_equivalence", counterexample=verdict.counterexample, method=verdict.method
        )
    return verdict


def _violation(
    step: int | None,
    rule: TraceRule,
    message: str,
    verdict: Equivalence | None = None,
) -> TraceValidation:
    logger.info("trace_violation", step=step, rule=rule.value, message=message)
    return TraceValidation(
        ok=False,
        step=step,
        rule=rule,
        message=message,
        counterexample=verdict.counterexample if verdict is not None else None,
        method=verdict.method if verdict is not None else "oracle",
    )


def validate_trace(
    t: CompilationTrace,
    *,
    max_vars: int = DEFAULT_MAX_VARS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> TraceValidation:
    """Check every step against its rule; the first violation is reported."""

    def equal(a: Evaluable, b: Evaluable) -> Equivalence:
        return check_equivalent(a, b, max_vars=max_vars, samples=samples, seed=seed)

    method = "oracle"
    for i, step in enumerate(t.steps):
        circuit = step.circuit
        check = validate(circuit)
        if not check:
            return _violation(i, TraceRule.CIRCUIT, f"node {check.node}: {check.message}")
        if step.size != circuit.size:
            return _violation(
                i, TraceRule.CIRCUIT, f"recorded size {step.size} != actual {circuit.size}"
            )
        if not 0 <= step.vtree_id < len(t.vtrees) or circuit.vtree != t.vtrees[step.vtree_id]:
            return _violation(i, TraceRule.CIRCUIT, "circuit vtree does not match the table")
        if any(not 0 <= j < i for j in step.parents):
            rule = TraceRule.APPLY if step.kind == StepKind.APPLY else TraceRule.RESTRUCTURE
            return _violation(i, rule, "parents must precede the step")
        match step.kind:
            case StepKind.CLAUSE:
                if step.clause is None:
                    if not circuit.is_true():
                        return _violation(i, TraceRule.CLAUSE, "satisfied clause is not constant 1")
                    continue
                if not 0 <= step.clause < len(t.formula.clauses):
                    return _violation(i, TraceRule.CLAUSE, f"no clause {step.clause}")
                clause = Cnf.from_clauses([t.formula.clauses[step.clause]], t.formula.universe)
                verdict = equal(circuit, clause)
                if not verdict:
                    return _violation(
                        i, TraceRule.CLAUSE, f"circuit differs from clause {step.clause}", verdict
                    )
            case StepKind.APPLY:
                if len(step.parents) != 2:
                    return _violation(i, TraceRule.APPLY, "apply needs two parents")
                left, right = (t.steps[j] for j in step.parents)
                if left.vtree_id != right.vtree_id or left.circuit.vtree != right.circuit.vtree:
                    return _violation(i, TraceRule.APPLY, "parents have different vtrees")
                if step.vtree_id != left.vtree_id:
                    return _violation(i, TraceRule.APPLY, "apply changed the vtree")
                try:
                    recomputed: StrDnnf | None = apply_and(left.circuit, right.circuit)
                except LabError:
                    recomputed = None
                if recomputed is not None and recomputed.root == circuit.root and (
                    recomputed.manager is circuit.manager
                ):
                    continue
                expected = recomputed or _Conjunction(left.circuit, right.circuit)
                verdict = equal(circuit, expected)
                method = verdict.method if verdict.method == "sampling" else method
                if not verdict:
                    return _violation(
                        i, TraceRule.APPLY, "circuit differs from the conjunction", verdict
                    )
            case StepKind.RESTRUCTURE:
                if len(step.parents) != 1:
                    return _violation(i, TraceRule.RESTRUCTURE, "restructure needs one parent")
                parent = t.steps[step.parents[0]]
                if circuit.vtree == parent.circuit.vtree:
                    return _violation(i, TraceRule.RESTRUCTURE, "vtree did not change")
                verdict = equal(circuit, parent.circuit)
                method = verdict.method if verdict.method == "sampling" else method
                if not verdict:
                    return _violation(
                        i,
                        TraceRule.RESTRUCTURE,
                        "restructured circuit is not equivalent to its parent",
                        verdict,
                    )
    if not t.steps:
        return _violation(None, TraceRule.FINAL, "trace is empty")
    if not t.aborted:
        verdict = check_equivalent(
            t.final, t.formula, t.formula.universe,
            max_vars=max_vars, samples=samples, seed=seed,
        )
        if not verdict:
            return _violation(
                len(t.steps) - 1, TraceRule.FINAL, "final circuit differs from the formula", verdict
            )
        method = verdict.method if verdict.method == "sampling" else method
    return TraceValidation(ok=True, method=method)


class _Conjunction:
    """Pointwise conjunction of two circuits, for when Apply cannot be rerun."""

    def __init__(self, a: StrDnnf, b: StrDnnf):
        self.a, self.b = a, b

    @property
    def variables(self) -> frozenset[int]:
        return self.a.variables | self.b.variables

    def evaluate_many(self, columns: Mapping[int, BoolArray], rows: int) -> BoolArray:
        return self.a.evaluate_many(columns, rows) & self.b.evaluate_many(columns, rows)
