"""Propositional building blocks: CNF formulas, vtrees and the brute-force oracle."""

from sdnnf_lab.logic.cnf import (
    Assignment,
    Clause,
    Cnf,
    SubformulaRelation,
    augment_with_fresh_variable,
    condition,
    is_subformula,
    make_clause,
    parse_dimacs,
    to_dimacs,
)
from sdnnf_lab.logic.oracle import (
    Equivalence,
    TruthTable,
    check_equivalent,
    count_models,
    equivalent,
    table_of,
)
from sdnnf_lab.logic.vtree import Vtree, VtreeShape, build, same_vtree

__all__ = [
    "Assignment",
    "Clause",
    "Cnf",
    "SubformulaRelation",
    "augment_with_fresh_variable",
    "condition",
    "is_subformula",
    "make_clause",
    "parse_dimacs",
    "to_dimacs",
    "Equivalence",
    "TruthTable",
    "check_equivalent",
    "count_models",
    "equivalent",
    "table_of",
    "Vtree",
    "VtreeShape",
    "build",
    "same_vtree",
]
