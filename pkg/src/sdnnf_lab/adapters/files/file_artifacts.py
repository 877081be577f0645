"""Filesystem artifact repository implementation."""
from pathlib import Path

import anyio
import structlog

from sdnnf_lab.interfaces import ArtifactRepository

logger = structlog.get_logger(__name__)


class FileArtifactRepository(ArtifactRepository):
    """Artifacts as text files under a root directory; names are relative paths."""

    def __init__(self, root: Path | str):
        self.root = anyio.Path(root)
        logger.info("file_artifact_repository_initialized", root=str(root))

    def _path(self, name: str) -> anyio.Path:
        path = Path(name)
        if path.is_absolute():
            return anyio.Path(path)
        if ".." in path.parts:
            raise ValueError(f"artifact name {name!r} leaves the repository root")
        return self.root / path

    async def save_text(self, name: str, text: str) -> str:
        path = self._path(name)
        await path.parent.mkdir(parents=True, exist_ok=True)
        await path.write_text(text, encoding="utf-8")
        logger.debug("artifact_saved", name=name, path=str(path), chars=len(text))
        return str(path)

    async def load_text(self, name: str) -> str:
        path = self._path(name)
        if not await path.is_file():
            logger.warning("artifact_not_found", name=name, path=str(path))
            raise FileNotFoundError(f"Artifact {name} not found at {path}")
        text = await path.read_text(encoding="utf-8")
        logger.debug("artifact_loaded", name=name, chars=len(text))
        return text

    async def exists(self, name: str) -> bool:
        return await self._path(name).is_file()

    async def list_names(self, prefix: str = "") -> list[str]:
        if not await self.root.is_dir():
            return []
        names = []
        async for path in self.root.rglob("*"):
            if await path.is_file():
                name = path.relative_to(self.root).as_posix()
                if name.startswith(prefix):
                    names.append(name)
        names.sort()
        logger.debug("artifacts_listed", prefix=prefix, count=len(names))
        return names
