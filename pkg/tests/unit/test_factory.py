"""Unit tests for the lab factory."""
import pytest

from sdnnf_lab.adapters.files import CsvResultsRepository, FileArtifactRepository
from sdnnf_lab.adapters.stub import StubArtifactRepository, StubResultsRepository
from sdnnf_lab.compiler import jobs_for
from sdnnf_lab.config import LabConfig
from sdnnf_lab.factory import LabFactory, configure_logging
from sdnnf_lab.models import DEFAULT_STRATEGIES


@pytest.fixture
def config(tmp_path) -> LabConfig:
    return LabConfig(artifacts_dir=tmp_path / "artifacts", limit=5000)


@pytest.mark.asyncio
class TestLabFactory:
    """Test lab factory functionality."""

    async def test_factory_creation_with_default_config(self):
        """GIVEN no configuration
        WHEN creating a factory
        THEN factory is created with default configuration."""
        # When
        factory = LabFactory()

        # Then
        assert isinstance(factory.config, LabConfig)
        assert not factory.is_initialized

    async def test_get_repositories_without_initialization(self, config):
        """GIVEN an uninitialized factory
        WHEN getting repositories
        THEN stub repositories are returned."""
        # Given
        factory = LabFactory(config)

        # When
        artifacts = factory.get_artifact_repository()
        results = factory.get_results_repository()

        # Then
        assert isinstance(artifacts, StubArtifactRepository)
        assert isinstance(results, StubResultsRepository)
        assert not config.artifacts_dir.exists()

    async def test_context_manager_initialize_and_cleanup(self, config):
        """GIVEN a factory as context manager
        WHEN entering and exiting context
        THEN the artifacts directory is created and file repositories are served."""
        # Given
        factory = LabFactory(config)

        # When/Then
        async with factory as f:
            assert f is factory
            assert f.is_initialized
            assert config.artifacts_dir.is_dir()
            artifacts = f.get_artifact_repository()
            results = f.get_results_repository()
            assert isinstance(artifacts, FileArtifactRepository)
            assert isinstance(results, CsvResultsRepository)
            assert str(results.path) == str(config.artifacts_dir / "results.csv")
            assert isinstance(f.get_artifact_repository(use_stub=True), StubArtifactRepository)

        assert not factory.is_initialized

    async def test_initialize_twice(self, config):
        """GIVEN an initialized factory
        WHEN initializing again
        THEN it stays initialized."""
        factory = LabFactory(config)
        await factory.initialize()

        await factory.initialize()

        assert factory.is_initialized
        await factory.cleanup()

    async def test_health_check(self, config):
        """GIVEN factories before and after initialization
        WHEN performing health checks
        THEN writability follows the artifacts directory."""
        # Given
        factory = LabFactory(config)

        # When
        before = await factory.health_check()
        async with factory:
            during = await factory.health_check()

        # Then
        assert before["factory_initialized"] is False
        assert before["artifacts"]["writable"] is False
        assert before["artifacts"]["error"]
        assert during["factory_initialized"] is True
        assert during["artifacts"] == {"writable": True, "error": None}
        assert list(config.artifacts_dir.iterdir()) == []

    async def test_manager_pool_uses_configured_limit(self, config):
        """GIVEN a configured edge ceiling
        WHEN asking for a manager pool
        THEN the pool carries it."""
        factory = LabFactory(config)

        pool = factory.manager_pool(strict=False)

        assert pool.limit == 5000
        assert not pool.strict
        assert factory.manager_pool().strict is config.strict_checks

    async def test_run_benchmark_stores_records(self, config):
        """GIVEN benchmark jobs and a results repository
        WHEN running through the factory
        THEN records come back and are stored."""
        # Given
        factory = LabFactory(config)
        results = factory.get_results_repository(use_stub=True)
        jobs = jobs_for("cycle", [3, 4], DEFAULT_STRATEGIES[:1])

        # When
        records = await factory.run_benchmark(jobs, results=results)

        # Then
        assert len(records) == 2
        assert await results.list_all() == records

    async def test_cleanup_when_not_initialized(self):
        """GIVEN an uninitialized factory
        WHEN calling cleanup
        THEN cleanup completes without error."""
        factory = LabFactory()

        await factory.cleanup()

        assert not factory.is_initialized


class TestConfigureLogging:
    """Test the logging setup."""

    def test_unknown_level(self):
        """GIVEN a level name logging does not know
        WHEN configuring logging
        THEN ValueError is raised."""
        with pytest.raises(ValueError, match="LOUD"):
            configure_logging("LOUD")
