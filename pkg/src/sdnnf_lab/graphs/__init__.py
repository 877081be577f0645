from sdnnf_lab.graphs.charged_graph import ChargedGraph, Edge, VertexPartition
from sdnnf_lab.graphs.connectivity import (
    bodlaender_component,
    is_2connected,
    is_connected,
    one_separators,
)
from sdnnf_lab.graphs.generators import (
    FAMILIES,
    ChargeOption,
    complete,
    cycle,
    family,
    grid,
    path,
    random_regular,
    with_charges,
)
from sdnnf_lab.graphs.tseitin import (
    components,
    condition_charges,
    constraint_clauses,
    incomplete_constraints,
    is_satisfiable_criterion,
    parity_clauses,
    satisfiable_side,
    satisfying_assignment,
    side_graph,
    tseitin_cnf,
)

__all__ = [
    "FAMILIES",
    "ChargeOption",
    "ChargedGraph",
    "Edge",
    "VertexPartition",
    "bodlaender_component",
    "complete",
    "components",
    "condition_charges",
    "constraint_clauses",
    "cycle",
    "family",
    "grid",
    "incomplete_constraints",
    "is_2connected",
    "is_connected",
    "is_satisfiable_criterion",
    "one_separators",
    "parity_clauses",
    "path",
    "random_regular",
    "satisfiable_side",
    "satisfying_assignment",
    "side_graph",
    "tseitin_cnf",
    "with_charges",
]
