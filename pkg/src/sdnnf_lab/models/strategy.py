"""Strategy model - how a CNF is compiled bottom-up."""
from enum import Enum

from pydantic import BaseModel, Field

from sdnnf_lab.logic.vtree import VtreeShape


class ClauseOrder(str, Enum):
    """Order in which clause circuits enter the schedule."""
    INPUT = "input"
    RANDOM = "random"
    GREEDY_MIN_SIZE = "greedy_min_size"
    GROUP_BY_VERTEX = "group_by_vertex"


class ApplyOrder(str, Enum):
    """How live circuits are paired for conjunction."""
    SEQUENTIAL = "sequential"
    BALANCED_TREE = "balanced_tree"
    GREEDY_MIN_PAIR = "greedy_min_pair"


class Strategy(BaseModel):
    """Vtree shape, clause order and apply order of one compilation run."""

    vtree_shape: VtreeShape = Field(VtreeShape.BALANCED, description="Shape of the working vtree")
    clause_order: ClauseOrder = Field(ClauseOrder.INPUT, description="Clause ordering")
    apply_order: ApplyOrder = Field(ApplyOrder.SEQUENTIAL, description="Apply ordering")
    seed: int = Field(0, description="Seed for random vtrees and random clause orders")
    restructure_to: VtreeShape | None = Field(
        None, description="Optional vtree shape the final circuit is restructured onto"
    )

    model_config = {"frozen": True, "json_schema_extra": {"example": {
        "vtree_shape": "balanced",
        "clause_order": "group_by_vertex",
        "apply_order": "greedy_min_pair",
        "seed": 0,
        "restructure_to": None,
    }}}

    @property
    def name(self) -> str:
        parts = [self.vtree_shape.value, self.clause_order.value, self.apply_order.value]
        if self.restructure_to is not None:
            parts.append(f"to_{self.restructure_to.value}")
        return "/".join(parts)

    @classmethod
    def parse(cls, name: str, seed: int = 0) -> "Strategy":
        """Inverse of `name`: "shape/clause_order/apply_order[/to_shape]"."""
        parts = name.split("/")
        if len(parts) not in (3, 4):
            raise ValueError(f"strategy name {name!r} needs 3 or 4 parts")
        restructure = None
        if len(parts) == 4:
            if not parts[3].startswith("to_"):
                raise ValueError(f"strategy name {name!r} has a bad restructure part")
            restructure = VtreeShape(parts[3][3:])
        return cls(
            vtree_shape=VtreeShape(parts[0]),
            clause_order=ClauseOrder(parts[1]),
            apply_order=ApplyOrder(parts[2]),
            seed=seed,
            restructure_to=restructure,
        )


DEFAULT_STRATEGIES: tuple[Strategy, ...] = (
    Strategy(vtree_shape=VtreeShape.LINEAR, apply_order=ApplyOrder.SEQUENTIAL),
    Strategy(vtree_shape=VtreeShape.BALANCED, apply_order=ApplyOrder.BALANCED_TREE),
    Strategy(
        vtree_shape=VtreeShape.BALANCED,
        clause_order=ClauseOrder.GROUP_BY_VERTEX,
        apply_order=ApplyOrder.GREEDY_MIN_PAIR,
    ),
    Strategy(
        vtree_shape=VtreeShape.LINEAR,
        clause_order=ClauseOrder.GREEDY_MIN_SIZE,
        apply_order=ApplyOrder.GREEDY_MIN_PAIR,
    ),
)
