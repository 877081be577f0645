"""Unit tests for CNF parsing, conditioning and subformula relations."""
import numpy as np
import pytest

from sdnnf_lab.errors import FormatError
from sdnnf_lab.logic.cnf import (
    Cnf,
    SubformulaRelation,
    augment_with_fresh_variable,
    condition,
    is_subformula,
    make_clause,
    parse_dimacs,
    to_dimacs,
)
from sdnnf_lab.logic.oracle import columns_for


class TestParseDimacs:
    """Test DIMACS parsing."""

    def test_parse_simple_formula(self):
        """GIVEN a well-formed DIMACS text
        WHEN parsing it
        THEN the universe and clauses are read in order."""
        # Given
        text = "c example\np cnf 3 2\n1 -2 0\n2 3 0\n"

        # When
        f = parse_dimacs(text)

        # Then
        assert f.universe == frozenset({1, 2, 3})
        assert f.clauses == ((1, -2), (2, 3))
        assert f.variables == frozenset({1, 2, 3})

    def test_clause_may_span_lines(self):
        """GIVEN a clause split over two lines
        WHEN parsing
        THEN it is read as one clause."""
        f = parse_dimacs("p cnf 2 1\n1\n-2 0\n")

        assert f.clauses == ((1, -2),)

    def test_unused_variables_stay_in_universe(self):
        """GIVEN a header announcing more variables than used
        WHEN parsing
        THEN the universe still covers every announced variable."""
        f = parse_dimacs("p cnf 4 1\n2 0\n")

        assert f.universe == frozenset({1, 2, 3, 4})
        assert f.variables == frozenset({2})

    @pytest.mark.parametrize(
        "text",
        [
            "1 2 0\n",
            "p cnf 2 1\n1 3 0\n",
            "p cnf 2 2\n1 2 0\n",
            "p cnf 2 1\n1 -1 0\n",
            "p cnf 2 1\n1 2\n",
            "p dnf 2 1\n1 0\n",
            "p cnf 2 1\n1 x 0\n",
        ],
    )
    def test_malformed_input_is_rejected(self, text):
        """GIVEN malformed DIMACS text
        WHEN parsing
        THEN a FormatError is raised."""
        with pytest.raises(FormatError):
            parse_dimacs(text)

    def test_format_error_is_a_value_error(self):
        """GIVEN a missing header
        WHEN parsing
        THEN the error can be caught as ValueError."""
        with pytest.raises(ValueError, match="dimacs"):
            parse_dimacs("")

    def test_round_trip_through_writer(self):
        """GIVEN a formula over 1..n
        WHEN writing and parsing it again
        THEN the same formula comes back."""
        # Given
        f = Cnf.from_clauses([[1, -3], [2], [-1, -2, 3]], universe=[1, 2, 3])

        # When
        again = parse_dimacs(to_dimacs(f))

        # Then
        assert again == f


class TestClauses:
    """Test clause normalization."""

    def test_literals_are_sorted_by_variable(self):
        assert make_clause([3, -1, 2]) == (-1, 2, 3)

    def test_duplicate_literals_collapse(self):
        assert make_clause([2, 2, -1]) == (-1, 2)

    def test_complementary_literals_are_rejected(self):
        with pytest.raises(ValueError):
            make_clause([1, -1])

    def test_clause_variables_must_be_in_universe(self):
        with pytest.raises(ValueError):
            Cnf.from_clauses([[1, 5]], universe=[1, 2])


class TestCondition:
    """Test F|a."""

    def test_satisfied_clause_disappears(self):
        """GIVEN (x1 or x2) and (not x1 or x3)
        WHEN conditioning on x1 = 1
        THEN only (x3) remains over the universe {2, 3}."""
        # Given
        f = Cnf.from_clauses([[1, 2], [-1, 3]])

        # When
        g = condition(f, {1: 1})

        # Then
        assert g.clauses == ((3,),)
        assert g.universe == frozenset({2, 3})

    def test_falsified_clause_becomes_empty(self):
        """GIVEN the unit clause (x1)
        WHEN conditioning on x1 = 0
        THEN the empty clause marks unsatisfiability."""
        g = condition(Cnf.from_clauses([[1]]), {1: 0})

        assert g.has_empty_clause()
        assert not g.evaluate({})

    def test_empty_assignment_is_identity(self):
        f = Cnf.from_clauses([[1, 2], [-2]])

        assert condition(f, {}) == f

    def test_assignment_outside_universe_is_rejected(self):
        with pytest.raises(ValueError):
            condition(Cnf.from_clauses([[1]]), {7: 1})


class TestSubformula:
    """Test clause-set comparisons."""

    def test_relations(self):
        """GIVEN formulas over a common universe
        WHEN comparing clause sets
        THEN proper, equal and unrelated pairs are told apart."""
        # Given
        f = Cnf.from_clauses([[1, 2]], universe=[1, 2])
        g = Cnf.from_clauses([[1, 2], [-1]], universe=[1, 2])
        h = Cnf.from_clauses([[-2]], universe=[1, 2])

        # Then
        assert is_subformula(f, g) == SubformulaRelation.PROPER
        assert is_subformula(g, Cnf.from_clauses([[-1], [1, 2], [1, 2]])) == (
            SubformulaRelation.EQUAL
        )
        assert is_subformula(h, g) == SubformulaRelation.NO

    def test_different_universes_are_rejected(self):
        with pytest.raises(ValueError):
            is_subformula(Cnf.from_clauses([[1]]), Cnf.from_clauses([[2]]))


class TestAugment:
    """Test the fresh-variable augmentation."""

    def test_conditioning_the_fresh_variable_restores_formula(self):
        """GIVEN an unsatisfiable formula
        WHEN augmenting it and conditioning the fresh variable to 0
        THEN the original clauses come back."""
        # Given
        f = Cnf.from_clauses([[1], [-1]])

        # When
        g, fresh = augment_with_fresh_variable(f)

        # Then
        assert fresh == 2
        assert g.clauses == ((1, 2), (-1, 2))
        assert g.evaluate({1: 0, 2: 1})
        assert condition(g, {fresh: 0}).clauses == f.clauses


class TestEvaluate:
    """Test scalar and vectorized evaluation agree."""

    def test_vectorized_matches_scalar(self):
        # Given
        f = Cnf.from_clauses([[1, -2], [2, 3], [-1, -3]])
        order = (1, 2, 3)
        columns = columns_for(order, 0, 8)

        # When
        many = f.evaluate_many(columns, 8)

        # Then
        for row in range(8):
            a = {v: (row >> j) & 1 for j, v in enumerate(order)}
            assert bool(many[row]) == f.evaluate(a)
        assert many.dtype == np.bool_
