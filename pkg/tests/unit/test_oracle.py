"""Unit tests for the brute-force oracle."""
import numpy as np
import pytest

from sdnnf_lab.errors import OracleLimitError
from sdnnf_lab.logic.cnf import Cnf, condition
from sdnnf_lab.logic.oracle import (
    check_equivalent,
    count_models,
    equivalent,
    is_satisfiable,
    sample_agreement,
    table_of,
)


def xor_cnf(vars: list[int], parity: int) -> Cnf:
    """Parity constraint as the CNF of its falsifying assignments."""
    clauses = []
    for row in range(1 << len(vars)):
        bits = [(row >> j) & 1 for j in range(len(vars))]
        if sum(bits) % 2 != parity:
            clauses.append([-v if b else v for v, b in zip(vars, bits, strict=True)])
    return Cnf.from_clauses(clauses, universe=vars)


class TestTableOf:
    """Test exhaustive tables."""

    def test_row_order_lowest_variable_first(self):
        """GIVEN the clause (x1 or x2)
        WHEN building its table over {1, 2}
        THEN only row 0 (both false) is 0."""
        table = table_of(Cnf.from_clauses([[1, 2]]), [1, 2])

        assert table.universe == (1, 2)
        assert table.bits.tolist() == [False, True, True, True]

    def test_empty_formula_is_all_ones(self):
        table = table_of(Cnf.from_clauses([], universe=[1, 2]), [1, 2])

        assert table.bits.all()
        assert table.count() == 4

    def test_chunked_evaluation_matches_single_chunk(self):
        """GIVEN a formula over 6 variables
        WHEN evaluating in chunks of 4 rows
        THEN the table equals the one-chunk table."""
        f = Cnf.from_clauses([[1, -4], [2, 5, -6], [-3, 6]])

        assert table_of(f, range(1, 7), chunk_bits=2) == table_of(f, range(1, 7))

    def test_universe_limit(self):
        with pytest.raises(OracleLimitError):
            table_of(Cnf.from_clauses([[1]]), range(1, 22))

    def test_variables_outside_universe(self):
        with pytest.raises(ValueError):
            table_of(Cnf.from_clauses([[1, 2]]), [1])

    def test_conditioned_table_is_sub_table(self):
        """GIVEN F over {1, 2, 3} and a = {x1 = 1}
        WHEN comparing the table of F|a with the sub-table of F at a
        THEN they are equal."""
        # Given
        f = Cnf.from_clauses([[1, 2], [-1, 3], [2, -3]])
        a = {1: 1}

        # When
        sub = table_of(f, [1, 2, 3]).condition(a)
        direct = table_of(condition(f, a), [2, 3])

        # Then
        assert sub == direct


class TestEquivalence:
    """Test equivalence checks."""

    def test_identical_formulas(self):
        x = Cnf.from_clauses([[1]])

        assert equivalent(x, x, [1])

    def test_counterexample(self):
        """GIVEN x and not x
        WHEN checking equivalence
        THEN the first differing row x = 0 is returned."""
        result = equivalent(Cnf.from_clauses([[1]]), Cnf.from_clauses([[-1]]), [1])

        assert not result
        assert result.counterexample == {1: 0}

    def test_sampling_above_the_cap(self):
        """GIVEN equal formulas and a tiny oracle cap
        WHEN checking equivalence
        THEN sampling is used and agrees."""
        f = Cnf.from_clauses([[1, 2], [3]])
        g = Cnf.from_clauses([[3], [2, 1]])

        result = check_equivalent(f, g, max_vars=2, samples=500)

        assert result.equal
        assert result.method == "sampling"

    def test_sampling_finds_difference(self):
        f = Cnf.from_clauses([[1]])
        g = Cnf.from_clauses([[-1]])

        result = sample_agreement(f, g, [1, 2, 3], samples=100, seed=1)

        assert not result.equal
        assert f.evaluate(result.counterexample) != g.evaluate(result.counterexample)


class TestCounting:
    """Test model counting and satisfiability."""

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_parity_has_half_the_assignments(self, k):
        vars = list(range(1, k + 1))

        assert count_models(xor_cnf(vars, 1), vars) == 2 ** (k - 1)

    def test_unsatisfiable(self):
        f = Cnf.from_clauses([[1], [-1, 2], [-2]])

        assert not is_satisfiable(f)
        assert count_models(f, [1, 2]) == 0

    def test_satisfiable(self):
        assert is_satisfiable(Cnf.from_clauses([[1, 2], [-1]]))

    def test_table_dtype(self):
        assert table_of(Cnf.from_clauses([[1]]), [1]).bits.dtype == np.bool_
