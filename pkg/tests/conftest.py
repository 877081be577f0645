"""Shared fixtures."""
import pytest
import structlog

from sdnnf_lab.circuits.manager import DnnfManager
from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.logic.vtree import Vtree, VtreeShape, build


@pytest.fixture
def pair_vtree() -> Vtree:
    return build([1, 2], VtreeShape.LINEAR)


@pytest.fixture
def linear3() -> Vtree:
    return build([1, 2, 3], VtreeShape.LINEAR)


@pytest.fixture
def manager2(pair_vtree: Vtree) -> DnnfManager:
    return DnnfManager(pair_vtree, strict=True)


@pytest.fixture
def manager3(linear3: Vtree) -> DnnfManager:
    return DnnfManager(linear3, strict=True)


@pytest.fixture
def triangle() -> ChargedGraph:
    """Triangle a=0, b=1, c=2 with x=ab, y=ac, z=bc and the odd charge on b."""
    return ChargedGraph.from_pairs([0, 1, 2], [(0, 1), (0, 2), (1, 2)], {0: 0, 1: 1, 2: 0})


@pytest.fixture
def bowtie() -> ChargedGraph:
    """Two triangles sharing vertex 2."""
    return ChargedGraph.from_pairs(
        range(5), [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]
    )


@pytest.fixture(autouse=True)
def reset_logging():
    """Undo logging setup done by the command line between tests."""
    yield
    structlog.reset_defaults()
