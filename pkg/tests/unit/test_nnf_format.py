"""Unit tests for the NNF text format."""
import pytest

from sdnnf_lab.circuits.manager import DnnfManager
from sdnnf_lab.circuits.nnf_format import dumps, loads, vtree_reference
from sdnnf_lab.circuits.strdnnf import apply_and, compile_clause, compile_parity
from sdnnf_lab.errors import FormatError
from sdnnf_lab.logic.oracle import equivalent
from sdnnf_lab.logic.vtree import VtreeShape, build


class TestNnfFormat:
    """Test dumps/loads."""

    def test_round_trip_is_bit_exact(self):
        """GIVEN a conjunction of a clause and a parity circuit
        WHEN writing, reading into a fresh manager and writing again
        THEN the text is unchanged and the circuit is equivalent."""
        # Given
        vtree = build(range(1, 6), VtreeShape.RANDOM, seed=11)
        manager = DnnfManager(vtree)
        s = apply_and(compile_clause(manager, (1, -3, 5)), compile_parity(manager, {2, 3, 4}, 0))
        text = dumps(s, vtree_path="run/vtree-0.vtree")

        # When
        again = loads(text, DnnfManager(vtree))

        # Then
        assert dumps(again, vtree_path="run/vtree-0.vtree") == text
        assert again.size == s.size
        assert equivalent(again, s, range(1, 6))

    def test_constant_carries_lambda(self, pair_vtree):
        text = dumps(compile_clause(DnnfManager(pair_vtree), ()))

        assert text == "nnf 1 0 2\nC 0 0\n"

    def test_header_counts(self, manager2):
        s = compile_clause(manager2, (1, 2))

        header = dumps(s).splitlines()[0]

        assert header == f"nnf {s.node_count} {s.size} 2"

    def test_vtree_reference(self):
        assert vtree_reference("c vtree out/v.vtree\nnnf 1 0 1\nC 1 0\n") == "out/v.vtree"
        assert vtree_reference("nnf 1 0 1\nC 1 0\n") is None

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "L 1\n",
            "nnf 2 2 2\nL 1\nA 0 1 0\n",
            "nnf 1 0 2\nL 3\n",
            "nnf 1 0 2\nC 2 0\n",
            "nnf 1 0 2\nC 1 9\n",
            "nnf 2 0 2\nL 1\n",
            "nnf 3 4 2\nL 1\nL 2\nA 0 1 0\n",
            "nnf 1 0 3\nL 1\n",
            "nnf 1 0 2\nQ 1\n",
        ],
    )
    def test_malformed_text(self, text, pair_vtree):
        with pytest.raises(FormatError):
            loads(text, DnnfManager(pair_vtree))
