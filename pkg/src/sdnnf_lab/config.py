"""Configuration for the str-DNNF laboratory."""
from pathlib import Path
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class LabConfig(BaseSettings):
    """Configuration for compilation runs, oracles and partition searches.

    Environment variables with SDNNF_ prefix override defaults
    (SDNNF_LIMIT sets the edge ceiling).
    """

    model_config = SettingsConfigDict(
        env_prefix="SDNNF_",
        case_sensitive=False,
        extra="ignore",
    )

    # Compilation resources
    limit: int = 2**22
    strict_checks: bool = True

    # Brute-force oracle
    oracle_max_vars: int = 20
    enumerate_max_vars: int = 24
    oracle_chunk_bits: int = 16
    sample_count: int = 100_000
    sample_seed: int = 0

    # Treewidth and partition searches
    treewidth_max_vertices: int = 20
    well_linked_budget: int = 200_000
    split_max_vertices: int = 40
    split_max_components: int = 16
    tripartition_trials: int = 10 * 9**3
    tripartition_exhaustive_max_blocks: int = 15

    # Benchmark
    jobs: int = 1

    # Storage
    artifacts_dir: Path = Path(".")

    # Logging
    log_level: str = "INFO"
    log_format: Literal["console", "json"] = "console"
