"""Report models - verification verdicts and run summaries."""
from datetime import UTC, datetime
from enum import Enum

from pydantic import BaseModel, Field


class CircuitCondition(str, Enum):
    """Well-formedness conditions checked on a str-DNNF node."""
    ACYCLIC = "acyclic"
    FAN_IN = "fan_in"
    DECOMPOSABLE = "decomposable"
    PARALLEL_EDGES = "parallel_edges"
    LAMBDA_AND = "lambda_and"
    LAMBDA_OR = "lambda_or"
    LAMBDA_VARS = "lambda_vars"
    LAMBDA_LITERAL = "lambda_literal"


class TraceRule(str, Enum):
    """Trace rules a step can violate."""
    CLAUSE = "clause"
    APPLY = "apply"
    RESTRUCTURE = "restructure"
    CIRCUIT = "circuit"
    FINAL = "final"


class WitnessCase(str, Enum):
    """Which branch of the operand case analysis produced a witness."""
    FEW_INCOMPLETE_B = "few_incomplete_b"
    MANY_INCOMPLETE_B = "many_incomplete_b"
    FEW_INCOMPLETE_A = "few_incomplete_a"
    SEARCH = "search"


class CircuitValidation(BaseModel):
    """Outcome of validating one circuit; the first violating node is reported."""

    ok: bool = Field(..., description="True when every reachable node is well formed")
    node: int | None = Field(None, description="First violating node id")
    condition: CircuitCondition | None = Field(None, description="Violated condition")
    message: str | None = Field(None, description="Human-readable detail")

    def __bool__(self) -> bool:
        return self.ok


class TraceValidation(BaseModel):
    """Outcome of validating a compilation trace."""

    ok: bool = Field(..., description="True when every step obeys its rule")
    step: int | None = Field(None, description="First violating step index")
    rule: TraceRule | None = Field(None, description="Violated rule")
    message: str | None = Field(None, description="Human-readable detail")
    counterexample: dict[int, int] | None = Field(
        None, description="Assignment witnessing a semantic mismatch"
    )
    method: str = Field("oracle", description="Equivalence method used (oracle or sampling)")

    def __bool__(self) -> bool:
        return self.ok

    model_config = {"json_schema_extra": {"example": {
        "ok": False,
        "step": 4,
        "rule": "restructure",
        "message": "restructured circuit is not equivalent to its parent",
        "counterexample": {"1": 0, "2": 1},
        "method": "oracle",
    }}}


class CompileSummary(BaseModel):
    """Size summary of one compilation run."""

    variables: int = Field(..., description="Number of formula variables")
    clauses: int = Field(..., description="Number of clauses in the formula")
    steps: int = Field(..., description="Trace length")
    max_intermediate: int = Field(..., description="Largest circuit size in edges")
    final_size: int = Field(..., description="Size of the last circuit in edges")
    final_nodes: int = Field(..., description="Node count of the last circuit")
    peak_live: int = Field(..., description="Largest summed size of simultaneously live circuits")
    aborted: bool = Field(False, description="True when the edge ceiling stopped the run")
    verified: bool = Field(False, description="True when the final circuit matched the formula")
    verification_method: str | None = Field(None, description="oracle or sampling")
    millis: int = Field(0, description="Wall time in milliseconds")

    model_config = {"json_schema_extra": {"example": {
        "variables": 12,
        "clauses": 32,
        "steps": 63,
        "max_intermediate": 418,
        "final_size": 0,
        "final_nodes": 1,
        "peak_live": 1204,
        "aborted": False,
        "verified": True,
        "verification_method": "oracle",
        "millis": 35,
    }}}


class RefutationReport(BaseModel):
    """Size profile of a refutation trace."""

    steps: int = Field(..., description="Trace length")
    max_intermediate: int = Field(..., description="Largest circuit size in edges")
    final_size: int = Field(..., description="Edges of the final constant-0 circuit")
    left_size: int = Field(..., description="Edges of the left operand of the last apply")
    right_size: int = Field(..., description="Edges of the right operand of the last apply")


class BenchmarkRecord(BaseModel):
    """One (instance, strategy) row of a benchmark."""

    family: str = Field(..., description="Graph family name")
    n: int = Field(..., description="Family size parameter")
    strategy: str = Field(..., description="Strategy name")
    seed: int = Field(0, description="Seed used for randomized choices")
    max_intermediate: int = Field(..., description="Largest circuit size in edges")
    final_size: int = Field(..., description="Size of the last circuit in edges")
    aborted: bool = Field(False, description="True when the edge ceiling stopped the run")
    millis: int = Field(0, description="Wall time in milliseconds")

    @property
    def key(self) -> tuple[str, int, str]:
        return (self.family, self.n, self.strategy)


class WitnessReport(BaseModel):
    """Verification report of an extracted satisfiable witness."""

    side: str = Field(..., description="A or B")
    case: WitnessCase = Field(..., description="Case analysis branch used")
    satisfiable: bool = Field(..., description="Satisfiability of the witness circuit")
    predicted_satisfiable: bool = Field(
        ..., description="Satisfiability predicted by the charge parity of the side"
    )
    oracle_verified: bool = Field(..., description="Equivalence to the side's Tseitin formula")
    verification_method: str = Field("oracle", description="oracle or sampling")
    size: int = Field(..., description="Edges of the witness circuit")
    left_size: int = Field(..., description="Edges of the left operand of the last apply")
    right_size: int = Field(..., description="Edges of the right operand of the last apply")
    apply_bound: int = Field(..., description="Composed apply size bound")
    parity_conjoins: int = Field(0, description="Missing parity constraints conjoined back")
    vertices: list[int] = Field(default_factory=list, description="Vertices of the side")
    charges: dict[int, int] = Field(default_factory=dict, description="Charges c^a on the side")
    cut_assignment: dict[int, int] = Field(
        default_factory=dict, description="Assignment to the cut variables"
    )
    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC))

    model_config = {"json_schema_extra": {"example": {
        "side": "B",
        "case": "few_incomplete_b",
        "satisfiable": True,
        "predicted_satisfiable": True,
        "oracle_verified": True,
        "verification_method": "oracle",
        "size": 88,
        "left_size": 120,
        "right_size": 14,
        "apply_bound": 3744,
        "parity_conjoins": 1,
        "vertices": [3, 4, 5],
        "charges": {"3": 0, "4": 1, "5": 1},
        "cut_assignment": {"4": 0, "7": 1},
    }}}


class PartitionReport(BaseModel):
    """A vertex partition with its measured treewidths and checked properties."""

    mode: str = Field(..., description="theorem4, lemma4 or tripartition")
    blocks: list[list[int]] = Field(..., description="Vertex blocks")
    treewidths: list[int] = Field(default_factory=list, description="Exact treewidth per block")
    bound: int = Field(0, description="Required treewidth lower bound per side")
    checks: dict[str, bool] = Field(default_factory=dict, description="Named property checks")
