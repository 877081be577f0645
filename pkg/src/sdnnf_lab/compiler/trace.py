"""Compilation traces: the sequence of circuits a bottom-up compiler builds.

Three step kinds exist. A clause step holds a circuit for one input clause,
an apply step conjoins two earlier circuits over the same vtree, and a
restructure step re-expresses an earlier circuit over another vtree.

Trace text format::

    trace <steps> <cnf-path>
    V <vtree-id> <vtree-path>
    S <i> C <clause-idx> <nnf-path>
    S <i> A <j> <k> <nnf-path>
    S <i> R <j> <vtree-id> <nnf-path>

A conditioned clause step whose clause became satisfied writes ``-`` as its
clause index. Each NNF file names its vtree in a ``c vtree`` comment, and a
``c aborted`` line marks a run stopped by the edge ceiling.
"""
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import Enum

import structlog

from sdnnf_lab.circuits.strdnnf import StrDnnf
from sdnnf_lab.errors import FormatError
from sdnnf_lab.logic.cnf import Cnf
from sdnnf_lab.logic.oracle import Equivalence
from sdnnf_lab.logic.vtree import Vtree
from sdnnf_lab.models.reports import CompileSummary

logger = structlog.get_logger(__name__)


class StepKind(str, Enum):
    CLAUSE = "C"
    APPLY = "A"
    RESTRUCTURE = "R"


@dataclass(frozen=True)
class TraceStep:
    """One circuit of a trace and how it was obtained.

    `clause` indexes the input clauses (None for a satisfied clause after
    conditioning), `parents` are earlier step indices, `support` is the set
    of input clause indices the circuit was built from.
    """

    kind: StepKind
    circuit: StrDnnf
    vtree_id: int
    clause: int | None = None
    parents: tuple[int, ...] = ()
    support: frozenset[int] = frozenset()
    size: int = -1

    def __post_init__(self) -> None:
        if self.size < 0:
            object.__setattr__(self, "size", self.circuit.size)


@dataclass
class CompilationTrace:
    formula: Cnf
    steps: list[TraceStep] = field(default_factory=list)
    vtrees: list[Vtree] = field(default_factory=list)
    aborted: bool = False
    strategy: str | None = None
    verification: Equivalence | None = None
    millis: int = 0

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TraceStep]:
        return iter(self.steps)

    def vtree_id(self, vtree: Vtree) -> int:
        """Index of a vtree in the table, appending it when new."""
        for i, known in enumerate(self.vtrees):
            if known == vtree:
                return i
        self.vtrees.append(vtree)
        return len(self.vtrees) - 1

    def add(self, step: TraceStep) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    @property
    def final(self) -> StrDnnf:
        if not self.steps:
            raise ValueError("empty trace has no final circuit")
        return self.steps[-1].circuit

    @property
    def max_intermediate(self) -> int:
        return max((s.size for s in self.steps), default=0)

    @property
    def final_size(self) -> int:
        return self.steps[-1].size if self.steps else 0

    def last_uses(self) -> list[int]:
        """For each step, the index of the last step reading it (itself if none)."""
        last = list(range(len(self.steps)))
        for i, step in enumerate(self.steps):
            for j in step.parents:
                last[j] = max(last[j], i)
        if self.steps:
            last[-1] = len(self.steps) - 1
        return last

    @property
    def peak_live(self) -> int:
        """Largest summed size of the circuits alive at one point of the run."""
        last = self.last_uses()
        peak = live = 0
        expiring: dict[int, int] = {}
        for i, step in enumerate(self.steps):
            live += step.size
            peak = max(peak, live)
            expiring[last[i]] = expiring.get(last[i], 0) + step.size
            live -= expiring.pop(i, 0)
        return peak

    def supporting_cnf(self, i: int) -> Cnf:
        """The conjunction of the input clauses step i was built from."""
        clauses = self.formula.clauses
        kept = tuple(clauses[j] for j in sorted(self.steps[i].support))
        return Cnf(self.formula.universe, kept)

    def last_apply(self) -> tuple[TraceStep, TraceStep]:
        """The two operands of the final step, which must be an apply."""
        last = self.steps[-1]
        if last.kind != StepKind.APPLY:
            raise ValueError("the last step is not an apply")
        j, k = last.parents
        return self.steps[j], self.steps[k]

    def summary(self) -> CompileSummary:
        final = self.steps[-1].circuit if self.steps else None
        return CompileSummary(
            variables=len(self.formula.universe),
            clauses=len(self.formula.clauses),
            steps=len(self.steps),
            max_intermediate=self.max_intermediate,
            final_size=self.final_size,
            final_nodes=final.node_count if final is not None else 0,
            peak_live=self.peak_live,
            aborted=self.aborted,
            verified=bool(self.verification) if self.verification is not None else False,
            verification_method=(
                self.verification.method if self.verification is not None else None
            ),
            millis=self.millis,
        )


@dataclass(frozen=True)
class StepRecord:
    """A step line of a trace file, before its circuit is loaded."""

    index: int
    kind: StepKind
    path: str
    clause: int | None = None
    parents: tuple[int, ...] = ()
    vtree_id: int | None = None


@dataclass(frozen=True)
class TraceFile:
    steps: int
    cnf_path: str
    vtree_paths: dict[int, str]
    records: tuple[StepRecord, ...]
    aborted: bool = False


def dumps(
    t: CompilationTrace,
    cnf_path: str,
    vtree_path: Callable[[int], str],
    step_path: Callable[[int], str],
) -> str:
    lines = [f"trace {len(t.steps)} {cnf_path}"]
    if t.aborted:
        lines.append("c aborted")
    lines.extend(f"V {i} {vtree_path(i)}" for i in range(len(t.vtrees)))
    for i, step in enumerate(t.steps):
        match step.kind:
            case StepKind.CLAUSE:
                idx = "-" if step.clause is None else str(step.clause)
                lines.append(f"S {i} C {idx} {step_path(i)}")
            case StepKind.APPLY:
                j, k = step.parents
                lines.append(f"S {i} A {j} {k} {step_path(i)}")
            case StepKind.RESTRUCTURE:
                (j,) = step.parents
                lines.append(f"S {i} R {j} {step.vtree_id} {step_path(i)}")
    return "\n".join(lines) + "\n"


def parse(text: str) -> TraceFile:
    header: tuple[int, str] | None = None
    vtrees: dict[int, str] = {}
    records: list[StepRecord] = []
    aborted = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if parts == ["c", "aborted"]:
            aborted = True
        if not parts or parts[0] == "c":
            continue
        try:
            if header is None:
                if parts[0] != "trace" or len(parts) != 3:
                    raise FormatError("trace", "missing 'trace <steps> <cnf-path>' header", lineno)
                header = (int(parts[1]), parts[2])
            elif parts[0] == "V" and len(parts) == 3:
                vtrees[int(parts[1])] = parts[2]
            elif parts[0] == "S":
                records.append(_record(parts, len(records), lineno))
            else:
                raise FormatError("trace", f"bad line {raw.strip()!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError("trace", str(exc), lineno) from exc
    if header is None:
        raise FormatError("trace", "missing header")
    if len(records) != header[0]:
        raise FormatError("trace", f"header announces {header[0]} steps, found {len(records)}")
    for r in records:
        if r.vtree_id is not None and r.vtree_id not in vtrees:
            raise FormatError("trace", f"step {r.index} names unknown vtree {r.vtree_id}")
    return TraceFile(header[0], header[1], vtrees, tuple(records), aborted)


def _record(parts: list[str], expected: int, lineno: int) -> StepRecord:
    if len(parts) < 4 or int(parts[1]) != expected:
        raise FormatError("trace", f"step lines must be numbered from 0, expected {expected}", lineno)
    i, tag = expected, parts[2]
    if tag == "C" and len(parts) == 5:
        clause = None if parts[3] == "-" else int(parts[3])
        return StepRecord(i, StepKind.CLAUSE, parts[4], clause=clause)
    if tag == "A" and len(parts) == 6:
        j, k = int(parts[3]), int(parts[4])
        if not (0 <= j < i and 0 <= k < i):
            raise FormatError("trace", f"apply step {i} reads a later step", lineno)
        return StepRecord(i, StepKind.APPLY, parts[5], parents=(j, k))
    if tag == "R" and len(parts) == 6:
        j = int(parts[3])
        if not 0 <= j < i:
            raise FormatError("trace", f"restructure step {i} reads a later step", lineno)
        return StepRecord(i, StepKind.RESTRUCTURE, parts[5], parents=(j,), vtree_id=int(parts[4]))
    raise FormatError("trace", f"bad step line {' '.join(parts)!r}", lineno)


def assemble(
    tf: TraceFile,
    formula: Cnf,
    vtrees: dict[int, Vtree],
    circuits: list[StrDnnf],
) -> CompilationTrace:
    """Rebuild a trace from a parsed trace file and its loaded circuits.

    Supports are recomputed from the step structure.
    """
    if len(circuits) != len(tf.records):
        raise FormatError("trace", f"{len(tf.records)} steps but {len(circuits)} circuits")
    ids = sorted(vtrees)
    if ids != list(range(len(ids))):
        raise FormatError("trace", "vtree ids must be numbered from 0")
    t = CompilationTrace(formula, vtrees=[vtrees[i] for i in ids], aborted=tf.aborted)
    for record, circuit in zip(tf.records, circuits, strict=True):
        if record.vtree_id is not None:
            vid = record.vtree_id
        else:
            matches = [i for i in ids if vtrees[i] == circuit.vtree]
            if not matches:
                raise FormatError("trace", f"step {record.index} uses a vtree outside the table")
            vid = matches[0]
        match record.kind:
            case StepKind.CLAUSE:
                support = frozenset() if record.clause is None else frozenset({record.clause})
            case _:
                support = frozenset().union(*(t.steps[j].support for j in record.parents))
        t.add(
            TraceStep(
                record.kind,
                circuit,
                vid,
                clause=record.clause,
                parents=record.parents,
                support=support,
            )
        )
    logger.debug("trace_assembled", steps=len(t), vtrees=len(t.vtrees))
    return t
