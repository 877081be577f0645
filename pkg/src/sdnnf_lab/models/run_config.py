"""RunConfig domain model - one command-line run and its outcome."""
from datetime import UTC, datetime
from enum import Enum, IntEnum
from typing import Any

from pydantic import BaseModel, Field, model_validator


class Command(str, Enum):
    """Command-line entry points."""
    GEN = "gen"
    COMPILE = "compile"
    PARTITION = "partition"
    BENCH = "bench"
    WITNESS = "witness"
    CHECK = "check"


class ExitCode(IntEnum):
    SUCCESS = 0
    USAGE = 1
    ABORTED = 2
    VERIFICATION_FAILED = 3


class RunConfig(BaseModel):
    """Parameters, seeds, limits and output paths of one command run."""

    command: Command = Field(..., description="Command being run")
    randomized: bool = Field(False, description="True when the run draws random choices")
    seed: int | None = Field(None, description="Seed; required for randomized runs")
    limit: int | None = Field(None, description="Edge ceiling per circuit")
    strict: bool = Field(True, description="Inline bound checks enabled")

    # Configuration
    inputs: dict[str, str] = Field(default_factory=dict, description="Input file paths by role")
    outputs: dict[str, str] = Field(default_factory=dict, description="Output file paths by role")
    options: dict[str, Any] = Field(default_factory=dict, description="Command-specific flags")

    # Outcome
    exit_code: ExitCode | None = Field(None, description="Exit status once finished")
    error_message: str | None = Field(None, description="Error message if the run failed")
    duration_ms: int | None = Field(None, description="Wall time in milliseconds")

    created_at: datetime = Field(default_factory=lambda: datetime.now(UTC))

    model_config = {"json_schema_extra": {"example": {
        "command": "bench",
        "randomized": True,
        "seed": 7,
        "limit": 4194304,
        "strict": False,
        "outputs": {"csv": "bench.csv", "svg": "bench.svg"},
        "options": {"family": "grid", "sizes": [2, 3, 4], "jobs": 2},
        "exit_code": 0,
    }}}

    @model_validator(mode="after")
    def _seeded(self) -> "RunConfig":
        if self.randomized and self.seed is None:
            raise ValueError(f"{self.command.value} draws random choices and needs --seed")
        return self

    def finished(self, code: ExitCode, started: datetime, error: str | None = None) -> "RunConfig":
        elapsed = datetime.now(UTC) - started
        return self.model_copy(update={
            "exit_code": code,
            "error_message": error,
            "duration_ms": int(elapsed.total_seconds() * 1000),
        })
