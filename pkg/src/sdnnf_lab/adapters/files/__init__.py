"""Filesystem repository implementations."""

from sdnnf_lab.adapters.files.csv_results import CsvResultsRepository
from sdnnf_lab.adapters.files.file_artifacts import FileArtifactRepository

__all__ = [
    "CsvResultsRepository",
    "FileArtifactRepository",
]
