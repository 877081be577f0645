"""Unit tests for exact treewidth, decompositions and well-linked sets."""
import networkx as nx
import pytest
from structlog.testing import capture_logs

from sdnnf_lab.errors import OracleLimitError
from sdnnf_lab.graphs import ChargedGraph, VertexPartition, complete, cycle, grid, path
from sdnnf_lab.partition import (
    TreeDecomposition,
    check_separator_property,
    decomposition_from_order,
    disjoint_paths,
    is_well_linked,
    treewidth,
    treewidth_by_search,
    treewidth_exact,
    verify_decomposition,
    well_linked_set,
)


def star(leaves: int) -> ChargedGraph:
    return ChargedGraph.from_pairs(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


class TestTreewidthExact:
    """Test the exact treewidth oracle."""

    @pytest.mark.parametrize(
        ("g", "expected"),
        [
            (path(2), 1),
            (path(6), 1),
            (star(4), 1),
            (cycle(4), 2),
            (cycle(9), 2),
            (complete(4), 3),
            (complete(7), 6),
            (grid(2, 4), 2),
            (grid(3, 3), 3),
        ],
    )
    def test_known_values(self, g, expected):
        """GIVEN graphs with known treewidth
        WHEN computing it exactly
        THEN the width matches and the witness decomposition verifies."""
        # When
        result = treewidth_exact(g)

        # Then
        assert result.width == expected
        assert verify_decomposition(g, result.decomposition, result.width)

    def test_single_vertex_and_empty(self):
        """GIVEN an isolated vertex and the empty graph
        WHEN computing treewidth
        THEN they are 0 and -1."""
        assert treewidth(ChargedGraph.from_pairs([0], [])) == 0
        assert treewidth_exact(nx.Graph()).width == -1

    def test_disconnected_components(self):
        """GIVEN a triangle next to a path
        WHEN computing treewidth
        THEN the width is the larger component's and the tree joins both."""
        g = ChargedGraph.from_pairs(range(6), [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])

        result = treewidth_exact(g)

        assert result.width == 2
        assert nx.is_tree(result.decomposition.tree())
        assert verify_decomposition(g, result.decomposition)

    def test_size_limit(self):
        """GIVEN more vertices than the oracle allows
        WHEN computing treewidth
        THEN OracleLimitError is raised."""
        with pytest.raises(OracleLimitError):
            treewidth_exact(path(6), max_vertices=5)

    @pytest.mark.parametrize("g", [cycle(5), grid(2, 3), complete(5), star(3), grid(3, 3)])
    def test_search_agrees(self, g):
        """GIVEN small graphs
        WHEN comparing the DP with branch and bound
        THEN both methods give the same width."""
        assert treewidth_by_search(g) == treewidth_exact(g).width

    def test_memoized_on_structure(self):
        """GIVEN two equal graphs built separately
        WHEN computing treewidth
        THEN both give the same cached value."""
        assert treewidth(grid(2, 3)) == treewidth(grid(2, 3)) == 2


class TestDecompositionVerifier:
    """Test the tree decomposition verifier."""

    def test_order_decomposition(self):
        """GIVEN C4 eliminated in vertex order
        WHEN building the decomposition
        THEN it verifies with width 2."""
        td = decomposition_from_order(cycle(4), [0, 1, 2, 3])

        assert td.width == 2
        assert verify_decomposition(cycle(4), td, 2)

    def test_missing_edge(self):
        """GIVEN bags of C4 that miss the edge 3-0
        WHEN verifying
        THEN the check fails naming the edge."""
        td = TreeDecomposition(
            (frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})), ((0, 1), (1, 2))
        )

        check = verify_decomposition(cycle(4), td)

        assert not check
        assert "edge" in check.reason

    def test_disconnected_occurrences(self):
        """GIVEN a path decomposition where vertex 0 occurs in two separated bags
        WHEN verifying
        THEN the running-intersection check fails."""
        g = cycle(4)
        td = TreeDecomposition(
            (frozenset({0, 1, 3}), frozenset({1, 2, 3}), frozenset({0, 3})),
            ((0, 1), (1, 2)),
        )

        check = verify_decomposition(g, td)

        assert not check
        assert "not connected" in check.reason

    def test_wrong_claimed_width(self):
        """GIVEN a valid decomposition
        WHEN the claimed width is off by one
        THEN the check fails."""
        result = treewidth_exact(cycle(5))

        assert not verify_decomposition(cycle(5), result.decomposition, result.width + 1)

    def test_not_a_tree(self):
        """GIVEN bags joined in a cycle
        WHEN verifying
        THEN the tree check fails."""
        bag = frozenset({0, 1})
        td = TreeDecomposition((bag, bag, bag), ((0, 1), (1, 2), (2, 0)))

        assert not verify_decomposition(path(2), td)

    def test_dumps(self):
        """GIVEN a decomposition
        WHEN serialising it
        THEN the header carries bag count and width."""
        td = decomposition_from_order(path(3), [0, 1, 2])

        lines = td.dumps().splitlines()

        assert lines[0] == "td 3 1"
        assert lines[1] == "b 0 0 1"


class TestWellLinked:
    """Test well-linked sets and Menger checks."""

    def test_disjoint_paths(self):
        """GIVEN C4
        WHEN counting disjoint paths between opposite pairs
        THEN two paths exist, and one between two vertices."""
        h = cycle(4).simple()

        assert disjoint_paths(h, [0, 1], [2, 3]) == 2
        assert disjoint_paths(h, [0], [2]) == 1

    @pytest.mark.parametrize(
        ("g", "size"),
        [(complete(2), 2), (complete(4), 4), (cycle(5), 3)],
    )
    def test_largest_set(self, g, size):
        """GIVEN small graphs
        WHEN searching for the largest well-linked set
        THEN its size is as expected and tw <= |S| + 1 <= 3 tw holds."""
        # When
        with capture_logs() as logs:
            result = well_linked_set(g)

        # Then
        assert result.complete
        assert result.size == size
        assert is_well_linked(g, result.vertices)
        assert result.treewidth == treewidth(g)
        assert result.bounds_hold(result.treewidth)
        assert not [e for e in logs if e["event"] == "well_linked_bound_violated"]

    def test_star_breaks_upper_bound(self):
        """GIVEN K1,3, whose three leaves are well-linked through length-0 paths
        WHEN searching for the largest well-linked set
        THEN |S| + 1 > 3 tw is reported as a warning."""
        # When
        with capture_logs() as logs:
            result = well_linked_set(star(3))

        # Then
        assert result.size == 3
        assert result.treewidth == 1
        assert not result.bounds_hold(1)
        violations = [e for e in logs if e["event"] == "well_linked_bound_violated"]
        assert violations == [
            {
                "event": "well_linked_bound_violated",
                "log_level": "warning",
                "size": 3,
                "treewidth": 1,
                "upper": 3,
            }
        ]

    def test_incomplete_search_is_not_checked(self):
        result = well_linked_set(complete(4), budget=3)

        assert not result.bounds_checked

    def test_star_leaves(self):
        """GIVEN K1,3
        WHEN checking candidate sets
        THEN the leaves are well-linked but center plus two leaves are not."""
        g = star(3)

        assert is_well_linked(g, {1, 2, 3})
        assert not is_well_linked(g, {0, 1, 2})

    def test_budget_exhausted(self):
        """GIVEN a tiny flow budget
        WHEN searching K4
        THEN the best set so far is returned as incomplete."""
        result = well_linked_set(complete(4), budget=3)

        assert not result.complete
        assert result.size == 2


class TestSeparatorProperty:
    """Test the cut inequality for well-linked sets."""

    def test_empty_side(self):
        """GIVEN B empty
        WHEN checking the inequality
        THEN it holds trivially."""
        g = complete(4)
        p = VertexPartition(frozenset(g.vertices), frozenset())

        assert check_separator_property(g, g.vertices, p)

    def test_k4_halves(self):
        """GIVEN K4 split in two pairs
        WHEN checking with S = V
        THEN 4 cut edges cover min = 2."""
        g = complete(4)

        assert check_separator_property(g, g.vertices, VertexPartition.of(g, {0, 1}))

    def test_exhaustive_on_small_grid(self):
        """GIVEN grid(2,3) and its largest well-linked set
        WHEN checking every bipartition
        THEN the inequality always holds."""
        g = grid(2, 3)
        s = well_linked_set(g).vertices

        for mask in range(1 << len(g.vertices)):
            a = {v for v in g.vertices if mask >> v & 1}
            assert check_separator_property(g, s, VertexPartition.of(g, a))

    def test_violation_detected(self):
        """GIVEN a path and S = its two ends plus the middle
        WHEN cutting one edge between two S vertices on each side
        THEN the inequality fails for a non-well-linked S."""
        g = path(4)
        p = VertexPartition.of(g, {0, 1})

        assert not check_separator_property(g, {0, 1, 2, 3}, p)
