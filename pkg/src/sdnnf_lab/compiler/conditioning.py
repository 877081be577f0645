"""Conditioning whole traces, and refutations obtained from a fresh variable.

Conditioning every circuit of a trace on a partial assignment gives a trace
of the conditioned formula: clause steps map to the conditioned clauses,
applies stay applies and restructures stay restructures. No circuit grows.
"""
from collections.abc import Mapping

import structlog

from sdnnf_lab.circuits.strdnnf import condition
from sdnnf_lab.compiler.compile import DEFAULT_LIMIT, compile_cnf
from sdnnf_lab.compiler.trace import CompilationTrace, StepKind, TraceStep
from sdnnf_lab.errors import InvariantViolation
from sdnnf_lab.logic import cnf
from sdnnf_lab.logic.cnf import Cnf
from sdnnf_lab.models.strategy import Strategy

logger = structlog.get_logger(__name__)


def clause_index_map(f: Cnf, a: Mapping[int, int]) -> list[int | None]:
    """New index of every clause in F|a, or None when a satisfies it."""
    mapping: list[int | None] = []
    kept = 0
    for clause in f.clauses:
        if cnf.condition_clause(clause, a) is None:
            mapping.append(None)
        else:
            mapping.append(kept)
            kept += 1
    return mapping


def condition_trace(t: CompilationTrace, a: Mapping[int, int]) -> CompilationTrace:
    formula = cnf.condition(t.formula, a)
    if not a:
        return CompilationTrace(
            formula, list(t.steps), list(t.vtrees), t.aborted, t.strategy, t.verification, t.millis
        )
    index = clause_index_map(t.formula, a)
    out = CompilationTrace(formula, vtrees=list(t.vtrees), aborted=t.aborted, strategy=t.strategy)
    for i, step in enumerate(t.steps):
        circuit = condition(step.circuit, a)
        if circuit.size > step.size:
            raise InvariantViolation("condition_size", step=i, before=step.size, after=circuit.size)
        support = frozenset(j for j in (index[k] for k in step.support) if j is not None)
        clause = index[step.clause] if step.kind == StepKind.CLAUSE and step.clause is not None else None
        out.add(
            TraceStep(
                step.kind,
                circuit,
                step.vtree_id,
                clause=clause,
                parents=step.parents,
                support=support,
            )
        )
    logger.debug(
        "trace_conditioned",
        assigned=len(a),
        steps=len(out),
        max_before=t.max_intermediate,
        max_after=out.max_intermediate,
    )
    return out


def refute_via_fresh_variable(
    f: Cnf,
    strategy: Strategy | None = None,
    *,
    limit: int | None = DEFAULT_LIMIT,
    strict: bool = True,
    verify: bool = True,
) -> tuple[CompilationTrace, CompilationTrace, int]:
    """Compile F with one fresh positive literal added to every clause, then set it to 0.

    Returns the compilation of the augmented formula, the conditioned trace
    (a compilation of F itself, a refutation when F is unsatisfiable) and
    the fresh variable.
    """
    augmented, fresh = cnf.augment_with_fresh_variable(f)
    original = compile_cnf(augmented, strategy, limit=limit, strict=strict, verify=verify)
    conditioned = condition_trace(original, {fresh: 0})
    logger.info(
        "fresh_variable_refutation",
        fresh=fresh,
        steps=len(conditioned),
        final_size=conditioned.final_size,
    )
    return original, conditioned, fresh
