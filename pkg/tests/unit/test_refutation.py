"""Unit tests for refutation analysis."""
import pytest

from sdnnf_lab.compiler import (
    compile_cnf,
    extract_satisfiable_witness,
    reduce_to_2connected,
    refutation_report,
    require_refutation,
)
from sdnnf_lab.errors import NotARefutation, PreconditionError
from sdnnf_lab.graphs import (
    ChargedGraph,
    ChargeOption,
    VertexPartition,
    cycle,
    incomplete_constraints,
    is_2connected,
    tseitin_cnf,
    with_charges,
)
from sdnnf_lab.models import ApplyOrder, ClauseOrder, Strategy, WitnessCase


@pytest.fixture
def odd_bowtie(bowtie):
    return with_charges(bowtie, ChargeOption.SINGLE_ONE, vertex=0)


class TestRequireRefutation:
    """Test refutation checks and reports."""

    def test_satisfiable_trace_rejected(self):
        """GIVEN a compilation of a satisfiable formula
        WHEN requiring a refutation
        THEN NotARefutation is raised."""
        t = compile_cnf(tseitin_cnf(cycle(4)), Strategy())

        with pytest.raises(NotARefutation):
            require_refutation(t)

    def test_report(self, triangle):
        """GIVEN a refutation of the triangle
        WHEN reporting
        THEN the last apply's operand sizes are listed."""
        # Given
        t = compile_cnf(tseitin_cnf(triangle), Strategy())

        # When
        report = refutation_report(t)

        # Then
        assert report.steps == len(t)
        assert report.final_size == 0
        assert report.left_size == t.steps[9].size
        assert report.right_size == t.steps[5].size
        assert report.max_intermediate == t.max_intermediate


class TestReduceTo2Connected:
    """Test cutting a refutation at 1-separators."""

    def test_bowtie_reduces_to_triangle(self, odd_bowtie):
        """GIVEN a refutation of an odd-charged bowtie
        WHEN reducing at its cut vertex
        THEN a refutation of a 2-connected triangle remains."""
        # Given
        t = compile_cnf(tseitin_cnf(odd_bowtie), Strategy())

        # When
        g, reduced = reduce_to_2connected(odd_bowtie, t)

        # Then
        assert len(g.vertices) == 3
        assert is_2connected(g)
        assert reduced.final.is_false()
        assert reduced.formula.clause_set() == tseitin_cnf(g).clause_set()
        assert all(a.size <= b.size for a, b in zip(reduced, t, strict=True))

    def test_two_connected_graph_unchanged(self, triangle):
        """GIVEN a 2-connected graph
        WHEN reducing
        THEN graph and trace are returned as they are."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())

        g, reduced = reduce_to_2connected(triangle, t)

        assert g == triangle
        assert reduced is t

    def test_trace_of_another_formula(self, triangle, odd_bowtie):
        """GIVEN a refutation of a different formula
        WHEN reducing
        THEN the Tseitin precondition fails."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())

        with pytest.raises(PreconditionError) as exc_info:
            reduce_to_2connected(odd_bowtie, t)

        assert exc_info.value.condition == "tseitin_formula"


class TestWitnessPreconditions:
    """Test the preconditions of witness extraction."""

    def test_low_treewidth_side(self, triangle):
        """GIVEN a partition of the triangle with a single-vertex side
        WHEN extracting a witness
        THEN the treewidth precondition fails."""
        t = compile_cnf(tseitin_cnf(triangle), Strategy())

        with pytest.raises(PreconditionError) as exc_info:
            extract_satisfiable_witness(t, triangle, VertexPartition.of(triangle, [0]))

        assert exc_info.value.condition == "treewidth_a"


def hex_prism(b_cycle: list[int], a_cycle: list[int]) -> ChargedGraph:
    """Two hexagons joined rung by rung, odd charge on vertex 0 (which is in B)."""
    pairs = [(c[i], c[(i + 1) % 6]) for c in (b_cycle, a_cycle) for i in range(6)]
    pairs += list(zip(b_cycle, a_cycle, strict=True))
    return ChargedGraph.from_pairs(range(12), pairs, {v: int(v == 0) for v in range(12)})


# per-vertex groups conjoined as a balanced tree: the last apply joins
# the constraints of vertices 0..7 with those of vertices 8..11
HALVES = Strategy(clause_order=ClauseOrder.GROUP_BY_VERTEX, apply_order=ApplyOrder.BALANCED_TREE)


def operand_gaps(t, g: ChargedGraph) -> list[frozenset[int]]:
    return [incomplete_constraints(t.supporting_cnf(i), g) for i in t.steps[-1].parents]


class TestWitnessCases:
    """Test which branch of the operand case analysis builds the witness."""

    def test_few_incomplete_b(self):
        """GIVEN a refutation whose left operand misses two B constraints and two A constraints
        WHEN extracting a witness
        THEN side B is built from that operand with both parity constraints conjoined back."""
        # Given
        a_side = [4, 5, 6, 7, 10, 11]
        g = hex_prism([0, 1, 2, 3, 8, 9], a_side)
        t = compile_cnf(tseitin_cnf(g), HALVES)
        partition = VertexPartition.of(g, a_side)
        assert operand_gaps(t, g) == [frozenset({8, 9, 10, 11}), frozenset(range(8))]

        # When
        witness = extract_satisfiable_witness(t, g, partition)

        # Then
        report = witness.report
        assert report.case == WitnessCase.FEW_INCOMPLETE_B
        assert report.side == "B"
        assert report.parity_conjoins == 2
        assert report.satisfiable and report.predicted_satisfiable and report.oracle_verified
        assert report.size <= report.apply_bound
        assert sorted(witness.graph.vertices) == [0, 1, 2, 3, 8, 9]

    def test_many_incomplete_b(self):
        """GIVEN a refutation whose operands each miss three B constraints
        WHEN extracting a witness
        THEN side A is built by conjoining the A-side parts of both operands."""
        # Given
        a_side = [3, 4, 5, 6, 7, 11]
        g = hex_prism([0, 1, 2, 8, 9, 10], a_side)
        t = compile_cnf(tseitin_cnf(g), HALVES)
        partition = VertexPartition.of(g, a_side)
        gaps = operand_gaps(t, g)
        assert [len(gap & partition.b) for gap in gaps] == [3, 3]

        # When
        witness = extract_satisfiable_witness(t, g, partition)

        # Then
        report = witness.report
        assert report.case == WitnessCase.MANY_INCOMPLETE_B
        assert report.side == "A"
        assert report.parity_conjoins == 0
        assert report.satisfiable and report.oracle_verified
        assert report.size <= report.apply_bound
        assert sorted(witness.graph.vertices) == a_side
