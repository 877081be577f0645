"""Benchmark results repository interface."""
import csv
import io
from abc import ABC, abstractmethod
from collections.abc import Iterable

from sdnnf_lab.errors import FormatError
from sdnnf_lab.models.reports import BenchmarkRecord

CSV_COLUMNS = (
    "family",
    "n",
    "strategy",
    "seed",
    "max_intermediate",
    "final_size",
    "aborted",
    "millis",
)


def records_to_csv(records: Iterable[BenchmarkRecord]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = r.model_dump(include=set(CSV_COLUMNS))
        row["aborted"] = "true" if r.aborted else "false"
        writer.writerow(row)
    return out.getvalue()


def records_from_csv(text: str) -> list[BenchmarkRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    if tuple(reader.fieldnames) != CSV_COLUMNS:
        raise FormatError("csv", f"expected columns {','.join(CSV_COLUMNS)}", 1)
    try:
        return [BenchmarkRecord.model_validate(row) for row in reader]
    except ValueError as exc:
        raise FormatError("csv", str(exc)) from exc


class ResultsRepository(ABC):
    """Abstract repository for benchmark records, keyed by (family, n, strategy)."""

    @abstractmethod
    async def record(self, record: BenchmarkRecord) -> BenchmarkRecord:
        """Store a record, replacing one with the same key."""

    @abstractmethod
    async def record_many(self, records: list[BenchmarkRecord]) -> list[BenchmarkRecord]:
        """Store several records."""

    @abstractmethod
    async def get(self, family: str, n: int, strategy: str) -> BenchmarkRecord | None:
        """Get a record by key."""

    @abstractmethod
    async def list_all(self) -> list[BenchmarkRecord]:
        """All records sorted by key."""

    @abstractmethod
    async def list_by_family(self, family: str) -> list[BenchmarkRecord]:
        """Records of one graph family sorted by key."""

    @abstractmethod
    async def clear(self) -> int:
        """Delete every record; returns how many were removed."""

    async def export_csv(self) -> str:
        """All records as CSV text."""
        return records_to_csv(await self.list_all())
