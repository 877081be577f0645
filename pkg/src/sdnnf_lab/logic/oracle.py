"""Brute-force ground truth: truth tables, equivalence and model counting.

Row ``i`` of a table over the sorted universe ``(v_0, ..., v_{n-1})`` assigns
``v_j = (i >> j) & 1``: the lowest variable id is the least significant bit.
Evaluation is vectorized with numpy and runs in chunks of
``2**chunk_bits`` rows so large universes do not materialize every column
at once.
"""
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Protocol

import numpy as np
import numpy.typing as npt
import structlog

from sdnnf_lab.errors import OracleLimitError

logger = structlog.get_logger(__name__)

BoolArray = npt.NDArray[np.bool_]

DEFAULT_MAX_VARS = 20
DEFAULT_CHUNK_BITS = 16


class Evaluable(Protocol):
    """Anything the oracle can evaluate column-wise (CNFs and circuits)."""

    @property
    def variables(self) -> frozenset[int]: ...

    def evaluate_many(self, columns: Mapping[int, BoolArray], rows: int) -> BoolArray: ...


@dataclass(frozen=True)
class TruthTable:
    universe: tuple[int, ...]
    bits: BoolArray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.universe, self.bits.tobytes()))

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def condition(self, a: Mapping[int, int]) -> "TruthTable":
        """The sub-table at a partial assignment."""
        n = len(self.universe)
        if n == 0:
            return self
        cube = self.bits.reshape((2,) * n)
        index: list[int | slice] = [slice(None)] * n
        for j, var in enumerate(self.universe):
            if var in a:
                index[n - 1 - j] = int(a[var])
        rest = tuple(v for v in self.universe if v not in a)
        return TruthTable(rest, np.ascontiguousarray(cube[tuple(index)]).reshape(-1))


@dataclass(frozen=True)
class Equivalence:
    """Outcome of an equivalence check; `method` is "oracle" or "sampling"."""

    equal: bool
    counterexample: dict[int, int] | None = None
    method: str = "oracle"

    def __bool__(self) -> bool:
        return self.equal


def assignment_at(universe: Iterable[int], index: int) -> dict[int, int]:
    return {var: (index >> j) & 1 for j, var in enumerate(sorted(universe))}


def columns_for(universe: tuple[int, ...], start: int, stop: int) -> dict[int, BoolArray]:
    rows = np.arange(start, stop, dtype=np.int64)
    return {var: ((rows >> j) & 1).astype(np.bool_) for j, var in enumerate(universe)}


def _check(x: Evaluable, universe: tuple[int, ...], max_vars: int) -> None:
    if len(universe) > max_vars:
        raise OracleLimitError(len(universe), max_vars)
    missing = x.variables - set(universe)
    if missing:
        raise ValueError(f"variables {sorted(missing)} are outside the oracle universe")


def _chunks(n: int, chunk_bits: int) -> Iterator[tuple[int, int]]:
    total = 1 << n
    step = 1 << min(n, chunk_bits)
    for start in range(0, total, step):
        yield start, min(total, start + step)


def table_of(
    x: Evaluable,
    universe: Iterable[int],
    max_vars: int = DEFAULT_MAX_VARS,
    chunk_bits: int = DEFAULT_CHUNK_BITS,
) -> TruthTable:
    """Exhaustive truth table of x over the universe."""
    order = tuple(sorted(universe))
    _check(x, order, max_vars)
    parts = [
        x.evaluate_many(columns_for(order, start, stop), stop - start)
        for start, stop in _chunks(len(order), chunk_bits)
    ]
    return TruthTable(order, np.concatenate(parts))


def equivalent(
    a: Evaluable,
    b: Evaluable,
    universe: Iterable[int],
    max_vars: int = DEFAULT_MAX_VARS,
    chunk_bits: int = DEFAULT_CHUNK_BITS,
) -> Equivalence:
    """Table equality; on mismatch the first differing row is returned."""
    order = tuple(sorted(universe))
    _check(a, order, max_vars)
    _check(b, order, max_vars)
    for start, stop in _chunks(len(order), chunk_bits):
        columns = columns_for(order, start, stop)
        diff = a.evaluate_many(columns, stop - start) != b.evaluate_many(columns, stop - start)
        if diff.any():
            row = start + int(np.argmax(diff))
            return Equivalence(False, assignment_at(order, row))
    return Equivalence(True)


def count_models(
    x: Evaluable, universe: Iterable[int], max_vars: int = DEFAULT_MAX_VARS
) -> int:
    return table_of(x, universe, max_vars).count()


def is_satisfiable(x: Evaluable, max_vars: int = DEFAULT_MAX_VARS) -> bool:
    """Brute-force satisfiability over var(x)."""
    order = tuple(sorted(x.variables))
    _check(x, order, max_vars)
    for start, stop in _chunks(len(order), DEFAULT_CHUNK_BITS):
        if x.evaluate_many(columns_for(order, start, stop), stop - start).any():
            return True
    return False


def sample_agreement(
    a: Evaluable,
    b: Evaluable,
    universe: Iterable[int],
    samples: int,
    seed: int = 0,
    chunk_rows: int = 1 << DEFAULT_CHUNK_BITS,
) -> Equivalence:
    """Compare a and b on `samples` uniformly random assignments."""
    order = tuple(sorted(universe))
    rng = np.random.default_rng(seed)
    done = 0
    while done < samples:
        rows = min(chunk_rows, samples - done)
        draws = rng.integers(0, 2, size=(len(order), rows), dtype=np.uint8).astype(np.bool_)
        columns = {var: draws[j] for j, var in enumerate(order)}
        diff = a.evaluate_many(columns, rows) != b.evaluate_many(columns, rows)
        if diff.any():
            row = int(np.argmax(diff))
            example = {var: int(draws[j, row]) for j, var in enumerate(order)}
            return Equivalence(False, example, method="sampling")
        done += rows
    return Equivalence(True, method="sampling")


def check_equivalent(
    a: Evaluable,
    b: Evaluable,
    universe: Iterable[int] | None = None,
    *,
    max_vars: int = DEFAULT_MAX_VARS,
    samples: int = 100_000,
    seed: int = 0,
) -> Equivalence:
    """Oracle equivalence when the universe is small enough, sampling otherwise."""
    order = frozenset(universe) if universe is not None else a.variables | b.variables
    if len(order) <= max_vars:
        return equivalent(a, b, order, max_vars)
    logger.debug("equivalence_by_sampling", variables=len(order), samples=samples)
    return sample_agreement(a, b, order, samples, seed)
