"""Unit tests for bottom-up compilation and trace validation."""
from dataclasses import replace

import pytest

from sdnnf_lab.circuits import model_count
from sdnnf_lab.compiler import StepKind, compile_cnf, validate_trace
from sdnnf_lab.errors import PreconditionError
from sdnnf_lab.graphs import ChargeOption, cycle, tseitin_cnf, with_charges
from sdnnf_lab.logic.cnf import Cnf
from sdnnf_lab.logic.vtree import VtreeShape
from sdnnf_lab.models import (
    DEFAULT_STRATEGIES,
    ApplyOrder,
    ClauseOrder,
    Strategy,
    TraceRule,
)

ALL_STRATEGIES = [
    Strategy(vtree_shape=shape, clause_order=clause_order, apply_order=apply_order, seed=3)
    for shape in VtreeShape
    for clause_order in ClauseOrder
    for apply_order in ApplyOrder
]


class TestCompileCnf:
    """Test compile_cnf."""

    @pytest.mark.parametrize("strategy", ALL_STRATEGIES, ids=lambda s: s.name)
    def test_triangle_refuted_by_every_strategy(self, triangle, strategy):
        """GIVEN the unsatisfiable triangle formula
        WHEN compiling with any strategy
        THEN the final circuit is the constant 0 and the trace validates."""
        # When
        t = compile_cnf(tseitin_cnf(triangle), strategy)

        # Then
        assert t.final.is_false()
        assert t.verification is not None and t.verification.equal
        assert validate_trace(t).ok

    def test_satisfiable_cycle_model_count(self):
        """GIVEN the all-zero Tseitin formula of a 4-cycle
        WHEN compiling it
        THEN the result has 2^(|E|-|V|+1) models."""
        # Given
        g = with_charges(cycle(4), ChargeOption.ALL_ZERO)
        f = tseitin_cnf(g)

        # When
        t = compile_cnf(f, DEFAULT_STRATEGIES[2])

        # Then
        assert not t.final.is_false()
        assert model_count(t.final, f.universe) == 2
        assert t.summary().verified

    def test_edge_ceiling_aborts(self, triangle):
        """GIVEN an edge ceiling below every clause circuit
        WHEN compiling
        THEN the run is marked aborted and left unverified."""
        # When
        t = compile_cnf(tseitin_cnf(triangle), Strategy(), limit=1)

        # Then
        assert t.aborted
        assert t.verification is None
        assert len(t) <= 1
        assert t.summary().aborted

    def test_empty_formula_rejected(self):
        """GIVEN a formula without clauses
        WHEN compiling
        THEN PreconditionError names the failed condition."""
        with pytest.raises(PreconditionError) as exc_info:
            compile_cnf(Cnf(frozenset({1}), ()))

        assert exc_info.value.condition == "nonempty_formula"

    def test_restructure_step(self):
        """GIVEN a strategy with a restructure target of another shape
        WHEN compiling
        THEN the trace ends with a restructure onto a second vtree."""
        # Given
        f = tseitin_cnf(cycle(4))
        strategy = Strategy(vtree_shape=VtreeShape.LINEAR, restructure_to=VtreeShape.BALANCED)

        # When
        t = compile_cnf(f, strategy)

        # Then
        last = t.steps[-1]
        assert last.kind == StepKind.RESTRUCTURE
        assert last.vtree_id == 1
        assert len(t.vtrees) == 2
        assert validate_trace(t).ok

    def test_unit_clauses(self):
        """GIVEN a formula of unit clauses
        WHEN compiling
        THEN the result is the single model."""
        f = Cnf.from_clauses([(1,), (-2,), (3,)])

        t = compile_cnf(f, Strategy(apply_order=ApplyOrder.BALANCED_TREE))

        assert model_count(t.final, f.universe) == 1


class TestValidateTrace:
    """Test validate_trace."""

    def test_wrong_clause_detected(self, triangle):
        """GIVEN a clause step labelled with another clause
        WHEN validating
        THEN the clause rule fails at that step with a counterexample."""
        # Given
        t = compile_cnf(tseitin_cnf(triangle), Strategy())
        t.steps[0] = replace(t.steps[0], clause=1)

        # When
        check = validate_trace(t)

        # Then
        assert not check
        assert check.step == 0
        assert check.rule == TraceRule.CLAUSE
        assert check.counterexample is not None

    def test_wrong_apply_detected(self, triangle):
        """GIVEN an apply step whose circuit is one of its operands
        WHEN validating
        THEN the apply rule fails at that step."""
        # Given
        t = compile_cnf(tseitin_cnf(triangle), Strategy())
        t.steps[6] = replace(t.steps[6], circuit=t.steps[0].circuit, size=-1)

        # When
        check = validate_trace(t)

        # Then
        assert check.step == 6
        assert check.rule == TraceRule.APPLY

    def test_recorded_size_checked(self, triangle):
        """GIVEN a step whose recorded size is wrong
        WHEN validating
        THEN the circuit rule fails."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())
        t.steps[2] = replace(t.steps[2], size=t.steps[2].size + 1)

        check = validate_trace(t)

        assert check.step == 2
        assert check.rule == TraceRule.CIRCUIT

    def test_parents_must_precede(self, triangle):
        """GIVEN an apply reading a later step
        WHEN validating
        THEN the apply rule fails."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())
        t.steps[6] = replace(t.steps[6], parents=(0, 8))

        check = validate_trace(t)

        assert check.step == 6
        assert check.rule == TraceRule.APPLY

    def test_empty_trace(self, triangle):
        """GIVEN a trace without steps
        WHEN validating
        THEN the final rule fails."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())
        t.steps.clear()

        check = validate_trace(t)

        assert check.rule == TraceRule.FINAL
