"""Three-way partition of a contracted multigraph keeping edges in every part."""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np
import structlog

from sdnnf_lab.errors import PreconditionError, SearchBudgetExhausted
from sdnnf_lab.partition.contracted import ContractedGraph
from sdnnf_lab.partition.params import DEFAULT_PARAMS, PartitionParams

logger = structlog.get_logger(__name__)

DEFAULT_TRIALS = 10 * 9**3
EXHAUSTIVE_MAX_BLOCKS = 15


@dataclass(frozen=True)
class Tripartition:
    parts: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    kept_edges: tuple[int, int, int]
    required: Fraction
    trials: int
    method: str


def _kept(c: ContractedGraph, colors: np.ndarray) -> tuple[int, int, int]:
    kept = [0, 0, 0]
    for (i, j), m in c.multiplicity.items():
        if colors[i] == colors[j]:
            kept[int(colors[i])] += m
    return kept[0], kept[1], kept[2]


def _result(
    c: ContractedGraph, colors: np.ndarray, required: Fraction, trials: int, method: str
) -> Tripartition:
    parts = tuple(tuple(int(i) for i in np.flatnonzero(colors == p)) for p in range(3))
    return Tripartition(
        (parts[0], parts[1], parts[2]), _kept(c, colors), required, trials, method
    )


def tripartition(
    c: ContractedGraph,
    seed: int,
    params: PartitionParams = DEFAULT_PARAMS,
    *,
    trials: int = DEFAULT_TRIALS,
    exhaustive_max_blocks: int = EXHAUSTIVE_MAX_BLOCKS,
) -> Tripartition:
    """Color the blocks so that each color class keeps >= |E(G_C)| / share edges.

    Requires |E(G_C)| >= density * max degree. Random colorings are tried
    first; small instances fall back to exhaustive search.
    """
    edges, delta = c.edge_count(), c.max_degree()
    if edges == 0 or edges < params.density * delta:
        raise PreconditionError(
            "tripartition_density",
            f"|E(G_C)| = {edges} < {params.density} * {delta}",
        )
    required = Fraction(edges, params.share)
    rng = np.random.default_rng(seed)
    for trial in range(1, trials + 1):
        colors = rng.integers(0, 3, size=c.size)
        if min(_kept(c, colors)) >= required:
            logger.debug("tripartition_found", trials=trial, method="random")
            return _result(c, colors, required, trial, "random")
    if c.size <= exhaustive_max_blocks:
        # block 0 keeps color 0; the other colorings are relabellings
        for n, rest in enumerate(product(range(3), repeat=c.size - 1), start=1):
            colors = np.array((0, *rest))
            if min(_kept(c, colors)) >= required:
                logger.debug("tripartition_found", trials=trials + n, method="exhaustive")
                return _result(c, colors, required, trials + n, "exhaustive")
        raise SearchBudgetExhausted("tripartition", trials + 3 ** (c.size - 1))
    logger.warning("tripartition_exhausted", trials=trials, blocks=c.size)
    raise SearchBudgetExhausted("tripartition", trials)
