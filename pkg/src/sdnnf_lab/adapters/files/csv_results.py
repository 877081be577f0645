"""CSV benchmark results repository implementation."""
from pathlib import Path

import anyio
import structlog

from sdnnf_lab.interfaces import ResultsRepository, records_from_csv, records_to_csv
from sdnnf_lab.models import BenchmarkRecord

logger = structlog.get_logger(__name__)


class CsvResultsRepository(ResultsRepository):
    """Records kept in one CSV file, rewritten on every change."""

    def __init__(self, path: Path | str):
        self.path = anyio.Path(path)
        logger.info("csv_results_repository_initialized", path=str(path))

    async def _read(self) -> dict[tuple[str, int, str], BenchmarkRecord]:
        if not await self.path.is_file():
            return {}
        records = records_from_csv(await self.path.read_text(encoding="utf-8"))
        return {r.key: r for r in records}

    async def _write(self, records: dict[tuple[str, int, str], BenchmarkRecord]) -> None:
        await self.path.parent.mkdir(parents=True, exist_ok=True)
        rows = [records[k] for k in sorted(records)]
        await self.path.write_text(records_to_csv(rows), encoding="utf-8")
        logger.debug("benchmark_csv_written", path=str(self.path), rows=len(rows))

    async def record(self, record: BenchmarkRecord) -> BenchmarkRecord:
        records = await self._read()
        records[record.key] = record
        await self._write(records)
        return record

    async def record_many(self, records: list[BenchmarkRecord]) -> list[BenchmarkRecord]:
        stored = await self._read()
        for r in records:
            stored[r.key] = r
        await self._write(stored)
        return records

    async def get(self, family: str, n: int, strategy: str) -> BenchmarkRecord | None:
        return (await self._read()).get((family, n, strategy))

    async def list_all(self) -> list[BenchmarkRecord]:
        records = await self._read()
        return [records[k] for k in sorted(records)]

    async def list_by_family(self, family: str) -> list[BenchmarkRecord]:
        return [r for r in await self.list_all() if r.family == family]

    async def clear(self) -> int:
        count = len(await self._read())
        if await self.path.exists():
            await self.path.unlink()
        logger.debug("benchmark_records_cleared", count=count)
        return count
