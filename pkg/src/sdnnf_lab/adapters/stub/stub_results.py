"""Stub benchmark results repository implementation."""
import structlog

from sdnnf_lab.interfaces import ResultsRepository
from sdnnf_lab.models import BenchmarkRecord

logger = structlog.get_logger(__name__)


class StubResultsRepository(ResultsRepository):
    """In-memory stub implementation of the results repository."""

    def __init__(self) -> None:
        self._records: dict[tuple[str, int, str], BenchmarkRecord] = {}
        logger.info("stub_results_repository_initialized", storage="in-memory")

    async def record(self, record: BenchmarkRecord) -> BenchmarkRecord:
        replaced = record.key in self._records
        self._records[record.key] = record
        logger.debug(
            "benchmark_record_saved",
            family=record.family,
            n=record.n,
            strategy=record.strategy,
            replaced=replaced,
        )
        return record

    async def record_many(self, records: list[BenchmarkRecord]) -> list[BenchmarkRecord]:
        for r in records:
            self._records[r.key] = r
        logger.debug("benchmark_records_saved", count=len(records))
        return records

    async def get(self, family: str, n: int, strategy: str) -> BenchmarkRecord | None:
        record = self._records.get((family, n, strategy))
        logger.debug("benchmark_record_retrieved", family=family, n=n, found=record is not None)
        return record

    async def list_all(self) -> list[BenchmarkRecord]:
        return [self._records[k] for k in sorted(self._records)]

    async def list_by_family(self, family: str) -> list[BenchmarkRecord]:
        result = [self._records[k] for k in sorted(self._records) if k[0] == family]
        logger.debug("benchmark_records_retrieved_by_family", family=family, count=len(result))
        return result

    async def clear(self) -> int:
        count = len(self._records)
        self._records.clear()
        logger.debug("benchmark_records_cleared", count=count)
        return count
