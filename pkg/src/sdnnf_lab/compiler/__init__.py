from sdnnf_lab.compiler.benchmark import (
    BenchmarkJob,
    jobs_for,
    minimum_by_size,
    run_benchmark,
    run_job,
)
from sdnnf_lab.compiler.compile import DEFAULT_LIMIT, compile_cnf, validate_trace
from sdnnf_lab.compiler.conditioning import (
    clause_index_map,
    condition_trace,
    refute_via_fresh_variable,
)
from sdnnf_lab.compiler.refutation import (
    Witness,
    extract_satisfiable_witness,
    find_witness,
    reduce_to_2connected,
    refutation_report,
    require_refutation,
)
from sdnnf_lab.compiler.strategies import clause_groups, reduce
from sdnnf_lab.compiler.trace import (
    CompilationTrace,
    StepKind,
    StepRecord,
    TraceFile,
    TraceStep,
)

__all__ = [
    "DEFAULT_LIMIT",
    "BenchmarkJob",
    "CompilationTrace",
    "StepKind",
    "StepRecord",
    "TraceFile",
    "TraceStep",
    "Witness",
    "clause_groups",
    "clause_index_map",
    "compile_cnf",
    "condition_trace",
    "extract_satisfiable_witness",
    "find_witness",
    "jobs_for",
    "minimum_by_size",
    "reduce",
    "reduce_to_2connected",
    "refutation_report",
    "refute_via_fresh_variable",
    "require_refutation",
    "run_benchmark",
    "run_job",
    "validate_trace",
]
