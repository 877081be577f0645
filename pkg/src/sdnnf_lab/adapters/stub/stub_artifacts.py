"""Stub artifact repository implementation."""
import structlog

from sdnnf_lab.interfaces import ArtifactRepository

logger = structlog.get_logger(__name__)


class StubArtifactRepository(ArtifactRepository):
    """In-memory stub implementation of the artifact repository."""

    def __init__(self) -> None:
        self._texts: dict[str, str] = {}
        logger.info("stub_artifact_repository_initialized", storage="in-memory")

    async def save_text(self, name: str, text: str) -> str:
        self._texts[name] = text
        logger.debug("artifact_saved", name=name, chars=len(text))
        return f"memory://{name}"

    async def load_text(self, name: str) -> str:
        text = self._texts.get(name)
        if text is None:
            logger.warning("artifact_not_found", name=name)
            raise FileNotFoundError(f"Artifact {name} not found")
        logger.debug("artifact_loaded", name=name, chars=len(text))
        return text

    async def exists(self, name: str) -> bool:
        return name in self._texts

    async def list_names(self, prefix: str = "") -> list[str]:
        names = sorted(n for n in self._texts if n.startswith(prefix))
        logger.debug("artifacts_listed", prefix=prefix, count=len(names))
        return names
