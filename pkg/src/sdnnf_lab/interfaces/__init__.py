"""Repository interfaces for the str-DNNF laboratory."""

from sdnnf_lab.interfaces.artifacts import ArtifactRepository
from sdnnf_lab.interfaces.results import (
    CSV_COLUMNS,
    ResultsRepository,
    records_from_csv,
    records_to_csv,
)

__all__ = [
    "CSV_COLUMNS",
    "ArtifactRepository",
    "ResultsRepository",
    "records_from_csv",
    "records_to_csv",
]
