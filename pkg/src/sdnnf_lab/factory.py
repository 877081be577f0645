"""Factory wiring configuration, logging, repositories and circuit managers."""
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from types import TracebackType
from typing import Any, Self

import anyio
import orjson
import structlog

from sdnnf_lab.adapters.files import CsvResultsRepository, FileArtifactRepository
from sdnnf_lab.adapters.stub import StubArtifactRepository, StubResultsRepository
from sdnnf_lab.circuits.manager import ManagerPool
from sdnnf_lab.compiler.benchmark import BenchmarkJob, run_benchmark
from sdnnf_lab.config import LabConfig
from sdnnf_lab.interfaces import ArtifactRepository, ResultsRepository
from sdnnf_lab.models.reports import BenchmarkRecord

logger = structlog.get_logger(__name__)

RESULTS_FILE = "results.csv"


def configure_logging(level: str = "INFO", fmt: str = "console") -> None:
    """Install the structlog pipeline; logs go to stderr so stdout stays for results."""
    try:
        min_level = logging.getLevelNamesMapping()[level.upper()]
    except KeyError:
        raise ValueError(f"unknown log level {level!r}") from None

    processors: list[Any] = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
    ]
    factory: Any
    if fmt == "json":
        processors += [
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer(serializer=orjson.dumps),
        ]
        factory = structlog.BytesLoggerFactory(file=sys.stderr.buffer)
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))
        factory = structlog.PrintLoggerFactory(file=sys.stderr)

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(min_level),
        logger_factory=factory,
        cache_logger_on_first_use=False,
    )


class LabFactory:
    """Factory for laboratory repositories, node managers and benchmark runs."""

    def __init__(self, config: LabConfig | None = None):
        """Initialize factory with configuration.

        Args:
            config: Lab configuration. If None, settings are read from the
                environment (SDNNF_*) over the defaults.
        """
        self.config = config or LabConfig()
        self._is_initialized = False
        logger.info(
            "lab_factory_created",
            artifacts_dir=str(self.config.artifacts_dir),
            limit=self.config.limit,
        )

    def configure_logging(self) -> None:
        configure_logging(self.config.log_level, self.config.log_format)

    @property
    def is_initialized(self) -> bool:
        return self._is_initialized

    async def initialize(self) -> None:
        """Create the artifacts directory."""
        if self._is_initialized:
            logger.warning("factory_already_initialized")
            return

        try:
            await anyio.Path(self.config.artifacts_dir).mkdir(parents=True, exist_ok=True)
            self._is_initialized = True
            logger.info("factory_initialized", artifacts_dir=str(self.config.artifacts_dir))
        except OSError as e:
            logger.error(
                "factory_initialization_failed", error=str(e), error_type=type(e).__name__
            )
            raise

    async def cleanup(self) -> None:
        if not self._is_initialized:
            return
        self._is_initialized = False
        logger.info("factory_cleanup_complete")

    async def health_check(self) -> dict[str, Any]:
        """Report whether the artifacts directory exists and is writable."""
        root = anyio.Path(self.config.artifacts_dir)
        health: dict[str, Any] = {
            "factory_initialized": self._is_initialized,
            "artifacts": {"writable": False, "error": None},
        }
        marker = root / ".health"
        try:
            await marker.write_text("ok")
            await marker.unlink()
            health["artifacts"]["writable"] = True
        except OSError as e:
            health["artifacts"]["error"] = str(e)
            logger.warning("artifacts_health_check_failed", error=str(e))
        logger.debug("health_check_completed", **health)
        return health

    # Repository factory methods

    def get_artifact_repository(
        self, use_stub: bool = False, root: Path | str | None = None
    ) -> ArtifactRepository:
        """Get artifact repository.

        Args:
            use_stub: If True, return the in-memory implementation. If False and
                not initialized, falls back to the stub with a warning.
            root: Directory for the files; defaults to `artifacts_dir`.
        """
        if use_stub or not self._is_initialized:
            if not use_stub:
                logger.warning(
                    "artifact_repository_fallback_to_stub", reason="factory_not_initialized"
                )
            return StubArtifactRepository()
        return FileArtifactRepository(root if root is not None else self.config.artifacts_dir)

    def get_results_repository(
        self, use_stub: bool = False, path: Path | str | None = None
    ) -> ResultsRepository:
        """Get benchmark results repository.

        Args:
            use_stub: If True, return the in-memory implementation. If False and
                not initialized, falls back to the stub with a warning.
            path: CSV file; defaults to `results.csv` under `artifacts_dir`.
        """
        if use_stub or not self._is_initialized:
            if not use_stub:
                logger.warning(
                    "results_repository_fallback_to_stub", reason="factory_not_initialized"
                )
            return StubResultsRepository()
        return CsvResultsRepository(
            path if path is not None else Path(self.config.artifacts_dir) / RESULTS_FILE
        )

    # Compilation resources

    def manager_pool(self, *, strict: bool | None = None) -> ManagerPool:
        """A fresh pool of node managers under the configured edge ceiling."""
        return ManagerPool(
            limit=self.config.limit,
            strict=self.config.strict_checks if strict is None else strict,
        )

    async def run_benchmark(
        self,
        jobs: Sequence[BenchmarkJob],
        *,
        workers: int | None = None,
        verify: bool = True,
        results: ResultsRepository | None = None,
    ) -> list[BenchmarkRecord]:
        """Run jobs under the configured ceiling and optionally store the records."""
        records = await run_benchmark(
            jobs,
            workers=workers if workers is not None else self.config.jobs,
            limit=self.config.limit,
            strict=False,
            verify=verify,
            samples=self.config.sample_count,
        )
        if results is not None:
            await results.record_many(records)
        return records

    async def __aenter__(self) -> Self:
        await self.initialize()
        return self

    async def __aexit__(
        self,
        exc_type: type[BaseException] | None,
        exc_val: BaseException | None,
        exc_tb: TracebackType | None,
    ) -> bool:
        await self.cleanup()
        return False
