"""Stub repository implementations for graceful degradation."""

from sdnnf_lab.adapters.stub.stub_artifacts import StubArtifactRepository
from sdnnf_lab.adapters.stub.stub_results import StubResultsRepository

__all__ = [
    "StubArtifactRepository",
    "StubResultsRepository",
]
