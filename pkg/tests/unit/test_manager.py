"""Unit tests for the node manager."""
from sdnnf_lab.circuits.manager import (
    DnnfManager,
    ManagerPool,
    NodeKind,
    apply_edge_bound,
    deep_recursion,
)
from sdnnf_lab.logic.vtree import VtreeShape, build


class TestHashConsing:
    """Test the unique table."""

    def test_literals_are_shared(self, manager2):
        assert manager2.literal(1) == manager2.literal(1)
        assert manager2.literal(1) != manager2.literal(-1)

    def test_children_precede_parents(self, manager3):
        """GIVEN a conjunction of three literals
        WHEN walking its nodes
        THEN every child id is below its parent id."""
        root = manager3.conjoin(
            manager3.conjoin(manager3.literal(1), manager3.literal(-2)), manager3.literal(3)
        )

        for n in manager3.reachable(root):
            assert all(c < n for c in manager3.children(n))

    def test_global_constants(self, manager2):
        assert manager2.is_false(manager2.false)
        assert manager2.is_true(manager2.true)
        assert manager2.lam(manager2.true) == 0


class TestLift:
    """Test padding a node up to an ancestor."""

    def test_lift_left_operand(self, manager2):
        """GIVEN the literal x1 under the left child of the root
        WHEN lifting it to the root
        THEN an AND with a constant-1 right child is built."""
        x = manager2.literal(1)

        lifted = manager2.lift(x, 0)

        assert manager2.kind(lifted) == NodeKind.AND
        a, b = manager2.children(lifted)
        assert a == x
        assert manager2.is_true(b)
        assert manager2.lam(b) == 2

    def test_lift_to_own_node_is_identity(self, manager2):
        x = manager2.literal(2)

        assert manager2.lift(x, manager2.lam(x)) == x


class TestConjoin:
    """Test bounds and memoization."""

    def test_memo_returns_same_node(self, manager3):
        a = manager3.disjoin(manager3.literal(1), manager3.literal(2))
        b = manager3.disjoin(manager3.literal(-1), manager3.literal(3))

        assert manager3.conjoin(a, b) == manager3.conjoin(b, a)

    def test_edge_bound_formula(self):
        assert apply_edge_bound(0, 0) == 8
        assert apply_edge_bound(4, 2) == 48


class TestConditionEdges:
    """Test that conditioning never grows a circuit."""

    def test_random_conditionings(self):
        """GIVEN conjunctions of disjunctions over a random vtree
        WHEN conditioning on several partial assignments
        THEN the edge count never grows."""
        # Given
        manager = DnnfManager(build(range(1, 7), VtreeShape.RANDOM, seed=4), strict=True)
        root = manager.true
        for lits in [(1, -2), (2, 3, -5), (-1, 4, 6), (5, -6)]:
            clause = manager.false
            for lit in lits:
                clause = manager.disjoin(clause, manager.literal(lit))
            root = manager.conjoin(root, clause)

        # When / Then
        for a in [{1: 1}, {2: 0, 5: 1}, {6: 0}, {1: 0, 3: 1, 4: 0}]:
            assert manager.edge_count(manager.condition(root, a)) <= manager.edge_count(root)


class TestManagerPool:
    """Test per-vtree manager reuse."""

    def test_same_shape_same_manager(self):
        pool = ManagerPool(limit=100)

        first = pool.get(build([1, 2, 3], VtreeShape.LINEAR))
        second = pool.get(build([1, 2, 3], VtreeShape.LINEAR))

        assert first is second
        assert first.limit == 100
        assert len(pool) == 1

    def test_different_shapes(self):
        pool = ManagerPool()

        linear = pool.get(build([1, 2, 3, 4], VtreeShape.LINEAR))
        balanced = pool.get(build([1, 2, 3, 4], VtreeShape.BALANCED))

        assert linear is not balanced
        assert len(pool) == 2

    def test_equal_shapes_from_different_builders_share(self):
        pool = ManagerPool()

        # on three variables the balanced split is 1 | 2 3, the linear shape
        first = pool.get(build([1, 2, 3], VtreeShape.LINEAR))
        second = pool.get(build([1, 2, 3], VtreeShape.BALANCED))

        assert first is second
        assert len(pool) == 1


def test_deep_recursion_restores_limit():
    import sys

    before = sys.getrecursionlimit()
    with deep_recursion(before + 1000):
        assert sys.getrecursionlimit() == before + 1000
    assert sys.getrecursionlimit() == before
