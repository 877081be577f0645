"""Benchmark runs: graph family x size x strategy, fanned out over worker threads."""
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import partial

import anyio
import structlog

from sdnnf_lab.compiler.compile import DEFAULT_LIMIT, compile_cnf
from sdnnf_lab.graphs.generators import ChargeOption, family, with_charges
from sdnnf_lab.graphs.tseitin import tseitin_cnf
from sdnnf_lab.models.reports import BenchmarkRecord
from sdnnf_lab.models.strategy import Strategy

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class BenchmarkJob:
    family: str
    n: int
    strategy: Strategy
    charges: ChargeOption = ChargeOption.TARGET_UNSAT
    seed: int = 0


def run_job(
    job: BenchmarkJob,
    *,
    limit: int | None = DEFAULT_LIMIT,
    strict: bool = False,
    verify: bool = True,
    samples: int = 100_000,
) -> BenchmarkRecord:
    """Compile one instance; every call owns its node managers."""
    started = time.perf_counter()
    g = with_charges(family(job.family, job.n, job.seed), job.charges, job.seed)
    trace = compile_cnf(
        tseitin_cnf(g), job.strategy, limit=limit, strict=strict, verify=verify, samples=samples
    )
    return BenchmarkRecord(
        family=job.family,
        n=job.n,
        strategy=job.strategy.name,
        seed=job.seed,
        max_intermediate=trace.max_intermediate,
        final_size=trace.final_size,
        aborted=trace.aborted,
        millis=int((time.perf_counter() - started) * 1000),
    )


def jobs_for(
    family_name: str,
    sizes: Iterable[int],
    strategies: Sequence[Strategy],
    charges: ChargeOption = ChargeOption.TARGET_UNSAT,
    seed: int = 0,
) -> list[BenchmarkJob]:
    if not strategies:
        raise ValueError("at least one strategy is required")
    return [
        BenchmarkJob(family_name, n, s, charges, seed) for n in sizes for s in strategies
    ]


async def run_benchmark(
    jobs: Sequence[BenchmarkJob],
    *,
    workers: int = 1,
    limit: int | None = DEFAULT_LIMIT,
    strict: bool = False,
    verify: bool = True,
    samples: int = 100_000,
) -> list[BenchmarkRecord]:
    """Run every job, at most `workers` at a time; records sorted by (family, n, strategy)."""
    limiter = anyio.CapacityLimiter(max(1, workers))
    records: list[BenchmarkRecord] = []

    async def one(job: BenchmarkJob) -> None:
        run = partial(run_job, job, limit=limit, strict=strict, verify=verify, samples=samples)
        record = await anyio.to_thread.run_sync(run, limiter=limiter)
        logger.info(
            "benchmark_run_finished",
            family=record.family,
            n=record.n,
            strategy=record.strategy,
            max_intermediate=record.max_intermediate,
            aborted=record.aborted,
        )
        records.append(record)

    async with anyio.create_task_group() as tg:
        for job in jobs:
            tg.start_soon(one, job)
    records.sort(key=lambda r: r.key)
    logger.info("benchmark_finished", runs=len(records), workers=workers)
    return records


def minimum_by_size(
    records: Iterable[BenchmarkRecord], field: str, ceiling: int | None = None
) -> dict[int, int]:
    """For each n, the smallest value of `field` over strategies.

    An aborted run counts as at least `ceiling`.
    """
    best: dict[int, int] = {}
    for r in records:
        value = int(getattr(r, field))
        if r.aborted and ceiling is not None:
            value = max(value, ceiling)
        best[r.n] = min(best.get(r.n, value), value)
    return dict(sorted(best.items()))
