"""Domain models for the str-DNNF laboratory."""

from sdnnf_lab.models.reports import (
    BenchmarkRecord,
    CircuitCondition,
    CircuitValidation,
    CompileSummary,
    PartitionReport,
    RefutationReport,
    TraceRule,
    TraceValidation,
    WitnessCase,
    WitnessReport,
)
from sdnnf_lab.models.run_config import Command, ExitCode, RunConfig
from sdnnf_lab.models.strategy import (
    DEFAULT_STRATEGIES,
    ApplyOrder,
    ClauseOrder,
    Strategy,
)

__all__ = [
    "DEFAULT_STRATEGIES",
    "ApplyOrder",
    "BenchmarkRecord",
    "CircuitCondition",
    "CircuitValidation",
    "ClauseOrder",
    "Command",
    "CompileSummary",
    "ExitCode",
    "PartitionReport",
    "RefutationReport",
    "RunConfig",
    "Strategy",
    "TraceRule",
    "TraceValidation",
    "WitnessCase",
    "WitnessReport",
]
