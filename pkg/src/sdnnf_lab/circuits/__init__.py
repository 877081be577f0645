"""Structured DNNF circuits and their text format."""

from sdnnf_lab.circuits.manager import (
    DnnfManager,
    ManagerPool,
    NodeKind,
    apply_edge_bound,
)
from sdnnf_lab.circuits.strdnnf import (
    StrDnnf,
    apply_and,
    compile_clause,
    compile_parity,
    compile_table,
    condition,
    enumerate_models,
    evaluate,
    find_model,
    is_satisfiable,
    model_count,
    restructure,
    validate,
)

__all__ = [
    "DnnfManager",
    "ManagerPool",
    "NodeKind",
    "apply_edge_bound",
    "StrDnnf",
    "apply_and",
    "compile_clause",
    "compile_parity",
    "compile_table",
    "condition",
    "enumerate_models",
    "evaluate",
    "find_model",
    "is_satisfiable",
    "model_count",
    "restructure",
    "validate",
]
