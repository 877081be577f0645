"""Command-line entry point: gen, compile, partition, bench, witness and check.

Exit codes: 0 success, 1 usage, 2 edge ceiling hit, 3 verification failure.
The edge ceiling defaults to SDNNF_LIMIT when set.
"""
import argparse
import sys
from collections.abc import Awaitable, Callable, Sequence
from datetime import UTC, datetime
from fractions import Fraction
from pathlib import Path
from typing import Any, NoReturn

import anyio
import orjson
import structlog

from sdnnf_lab.circuits.strdnnf import StrDnnf, validate
from sdnnf_lab.compiler import (
    compile_cnf,
    find_witness,
    jobs_for,
    minimum_by_size,
    validate_trace,
)
from sdnnf_lab.config import LabConfig
from sdnnf_lab.errors import (
    FormatError,
    InvariantViolation,
    LabError,
    NotARefutation,
    PreconditionError,
    ResourceLimitExceeded,
    UsageError,
)
from sdnnf_lab.factory import LabFactory, configure_logging
from sdnnf_lab.graphs import generators
from sdnnf_lab.graphs.charged_graph import ChargedGraph
from sdnnf_lab.graphs.tseitin import is_satisfiable_criterion, tseitin_cnf
from sdnnf_lab.interfaces import ArtifactRepository
from sdnnf_lab.logic.oracle import check_equivalent
from sdnnf_lab.logic.vtree import VtreeShape
from sdnnf_lab.models import (
    DEFAULT_STRATEGIES,
    ApplyOrder,
    ClauseOrder,
    Command,
    ExitCode,
    PartitionReport,
    RunConfig,
    Strategy,
)
from sdnnf_lab.partition import (
    DEFAULT_PARAMS,
    ContractedGraph,
    PartitionParams,
    PartitionSearch,
    lemma4_partition,
    theorem4_partition,
    treewidth,
    tripartition,
)
from sdnnf_lab.plotting import metric_for, plot_benchmark

logger = structlog.get_logger(__name__)

PARTITION_MODES = ("theorem4", "lemma4", "tripartition")
GRAPH_ARITY = {
    "grid": (1, 2),
    "cycle": (1, 1),
    "path": (1, 1),
    "complete": (1, 1),
    "random_regular3": (1, 1),
}
THEOREM4_CHECKS = ("covers", "a_connected", "b_connected", "treewidth_a", "treewidth_b")

Handler = Callable[[argparse.Namespace, LabFactory, RunConfig], Awaitable[ExitCode]]


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so bad arguments map to the usage exit code."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _choice(value: str) -> str:
    return value.replace("-", "_")


JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_NON_STR_KEYS


def _emit(payload: Any) -> None:
    sys.stdout.write(orjson.dumps(payload, option=JSON_OPTIONS).decode() + "\n")


def _located(factory: LabFactory, path: str | Path) -> tuple[ArtifactRepository, str]:
    """A repository rooted at the file's directory, and the file's name in it."""
    p = Path(path)
    return factory.get_artifact_repository(root=p.parent), p.name


def _search(config: LabConfig, seed: int) -> PartitionSearch:
    return PartitionSearch(
        seed=seed,
        max_vertices=config.treewidth_max_vertices,
        well_linked_budget=config.well_linked_budget,
        trials=config.tripartition_trials,
        exhaustive_max_blocks=config.tripartition_exhaustive_max_blocks,
        max_components=config.split_max_components,
        strict=config.strict_checks,
    )


def _params(args: argparse.Namespace) -> PartitionParams:
    if not args.relaxed:
        if args.side_bound is not None:
            raise UsageError("--side-bound needs --relaxed")
        return DEFAULT_PARAMS
    return PartitionParams.relaxed(gamma=Fraction(args.gamma), side_bound=args.side_bound)


def _graph_for(name: str, params: Sequence[int], seed: int) -> ChargedGraph:
    if name not in GRAPH_ARITY:
        raise UsageError(f"unknown graph family {name!r}; known: {sorted(GRAPH_ARITY)}")
    low, high = GRAPH_ARITY[name]
    if not low <= len(params) <= high:
        raise UsageError(f"{name} takes {low}..{high} size parameters, got {len(params)}")
    match name:
        case "grid":
            rows = params[0]
            return generators.grid(rows, params[1] if len(params) == 2 else rows)
        case "random_regular3":
            return generators.random_regular(params[0], 3, seed)
        case _:
            return generators.family(name, params[0], seed)


def _strategy(args: argparse.Namespace) -> Strategy:
    return Strategy(
        vtree_shape=VtreeShape(args.vtree),
        clause_order=ClauseOrder(args.clause_order),
        apply_order=ApplyOrder(args.apply_order),
        seed=args.seed or 0,
        restructure_to=None if args.restructure_to is None else VtreeShape(args.restructure_to),
    )


def _strategies(args: argparse.Namespace) -> list[Strategy]:
    if args.strategies is None:
        return [s.model_copy(update={"seed": args.seed or 0}) for s in DEFAULT_STRATEGIES]
    names = [n.strip() for n in args.strategies.split(",") if n.strip()]
    if not names:
        raise UsageError("at least one strategy is required")
    try:
        return [Strategy.parse(n, seed=args.seed or 0) for n in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _is_randomized(args: argparse.Namespace) -> bool:
    match Command(args.command):
        case Command.GEN:
            return args.charges == "random" or args.family == "random_regular3"
        case Command.COMPILE:
            return "random" in (args.vtree, args.clause_order, args.restructure_to)
        case Command.BENCH:
            return (
                args.charges == "random"
                or args.family == "random_regular3"
                or any(
                    "random" in (s.vtree_shape, s.clause_order, s.restructure_to)
                    for s in _strategies(args)
                )
            )
        case Command.PARTITION | Command.WITNESS:
            return True
        case Command.CHECK:
            return False


# Commands


async def _gen(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    g = _graph_for(args.family, args.params, args.seed or 0)
    g = generators.with_charges(g, generators.ChargeOption(args.charges), args.seed or 0)
    f = tseitin_cnf(g)
    prefix = Path(args.out or f"{args.family}_{'x'.join(map(str, args.params))}")
    repo, name = _located(factory, prefix)
    await repo.save_graph(f"{name}.graph", g)
    await repo.save_cnf(f"{name}.cnf", f)
    _emit({
        "graph": f"{prefix}.graph",
        "cnf": f"{prefix}.cnf",
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "clauses": len(f.clauses),
        "satisfiable": is_satisfiable_criterion(g),
    })
    return ExitCode.SUCCESS


async def _compile(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    config = factory.config
    repo, name = _located(factory, args.cnf)
    f = await repo.load_cnf(name)
    t = compile_cnf(
        f,
        _strategy(args),
        limit=config.limit,
        strict=config.strict_checks,
        verify=not args.no_verify,
        oracle_max_vars=config.oracle_max_vars,
        samples=config.sample_count,
        sample_seed=config.sample_seed,
        pool=factory.manager_pool(),
    )
    if args.trace_out:
        out_repo, out_name = _located(factory, args.trace_out)
        await out_repo.save_trace(out_name, t)
    summary = t.summary().model_dump(mode="json")
    summary["strategy"] = t.strategy
    summary["refutation"] = bool(t.steps) and not t.aborted and t.final.is_false()
    code = ExitCode.ABORTED if t.aborted else ExitCode.SUCCESS
    if args.validate:
        check = validate_trace(
            t,
            max_vars=config.oracle_max_vars,
            samples=config.sample_count,
            seed=config.sample_seed,
        )
        summary["validation"] = check.model_dump(mode="json")
        if not check:
            code = ExitCode.VERIFICATION_FAILED
    _emit(summary)
    return code


async def _partition(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    config = factory.config
    repo, name = _located(factory, args.graph)
    g = await repo.load_graph(name)
    params = _params(args)
    search = _search(config, args.seed)

    def width(block: frozenset[int]) -> int:
        return treewidth(g.induced(block), config.treewidth_max_vertices)

    match args.mode:
        case "theorem4" | "lemma4":
            find = theorem4_partition if args.mode == "theorem4" else lemma4_partition
            result = find(g, params, search)
            checks = result.checks(g)
            if args.mode == "theorem4":
                checks = {k: checks[k] for k in THEOREM4_CHECKS}
            report = PartitionReport(
                mode=args.mode,
                blocks=[sorted(result.a), sorted(result.b)],
                treewidths=[width(result.a), width(result.b)],
                bound=result.bound,
                checks=checks,
            )
        case _:
            contracted = ContractedGraph.singletons(g)
            tri = tripartition(
                contracted,
                args.seed,
                params,
                trials=config.tripartition_trials,
                exhaustive_max_blocks=config.tripartition_exhaustive_max_blocks,
            )
            blocks = [
                frozenset().union(*(contracted.blocks[i] for i in part)) for part in tri.parts
            ]
            report = PartitionReport(
                mode=args.mode,
                blocks=[sorted(b) for b in blocks],
                treewidths=[width(b) for b in blocks],
                bound=0,
                checks={
                    f"part{i}_keeps_edges": kept >= tri.required
                    for i, kept in enumerate(tri.kept_edges)
                },
            )
    if args.out:
        out_repo, out_name = _located(factory, args.out)
        await out_repo.save_report(out_name, report)
    _emit(report.model_dump(mode="json"))
    return ExitCode.SUCCESS if all(report.checks.values()) else ExitCode.VERIFICATION_FAILED


async def _bench(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    if args.low > args.high:
        raise UsageError(f"empty size range {args.low}..{args.high}")
    strategies = _strategies(args)
    charges = generators.ChargeOption(args.charges)
    seed = args.seed or 0
    jobs = jobs_for(args.family, range(args.low, args.high + 1), strategies, charges, seed)
    sample = generators.with_charges(generators.family(args.family, args.low, seed), charges, seed)
    field = metric_for(is_satisfiable_criterion(sample))

    results = factory.get_results_repository(path=args.csv)
    await results.clear()
    records = await factory.run_benchmark(
        jobs, workers=args.jobs, verify=not args.no_verify, results=results
    )
    if args.svg:
        plot_benchmark(records, args.svg, field, title=f"{args.family} ({args.charges})")
    _emit({
        "runs": len(records),
        "aborted": sum(r.aborted for r in records),
        "plotted": field,
        "minimum": minimum_by_size(records, field, factory.config.limit),
        "csv": str(args.csv),
        "svg": str(args.svg) if args.svg else None,
    })
    return ExitCode.SUCCESS


async def _witness(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    config = factory.config
    graph_repo, graph_name = _located(factory, args.graph)
    g = await graph_repo.load_graph(graph_name)
    trace_repo, trace_name = _located(factory, args.trace)
    t = await trace_repo.load_trace(trace_name, factory.manager_pool(strict=False))
    if args.cnf:
        cnf_repo, cnf_name = _located(factory, args.cnf)
        f = await cnf_repo.load_cnf(cnf_name)
        if f.clause_set() != t.formula.clause_set():
            raise UsageError(f"{args.cnf} is not the formula compiled by {args.trace}")
    reduced, split, witness = find_witness(
        g,
        t,
        _params(args),
        _search(config, args.seed),
        max_vars=config.oracle_max_vars,
        samples=config.sample_count,
        seed=args.seed,
    )
    out_repo, out = _located(factory, args.out)
    await out_repo.save_vtree(f"{out}.vtree", witness.circuit.vtree)
    await out_repo.save_circuit(f"{out}.nnf", witness.circuit, f"{out}.vtree")
    await out_repo.save_graph(f"{out}.graph", witness.graph)
    await out_repo.save_report(f"{out}.json", witness.report)
    report = witness.report
    verdict = "satisfiable" if report.satisfiable else "unsatisfiable"
    verified = f"{report.verification_method}-verified" if report.oracle_verified else "unverified"
    sys.stdout.write(f"side={report.side}, {verdict}, {verified}\n")
    logger.info(
        "witness_written",
        out=str(args.out),
        reduced_vertices=len(reduced.vertices),
        sides=(len(split.a), len(split.b)),
        case=report.case.value,
    )
    return ExitCode.SUCCESS


async def _check(args: argparse.Namespace, factory: LabFactory, run: RunConfig) -> ExitCode:
    config = factory.config
    if args.trace:
        if args.cnf or args.nnf:
            raise UsageError("check takes either --trace or a CNF and an NNF file")
        repo, name = _located(factory, args.trace)
        t = await repo.load_trace(name, factory.manager_pool(strict=False))
        check = validate_trace(
            t, max_vars=config.oracle_max_vars, samples=config.sample_count,
            seed=config.sample_seed,
        )
        _emit(check.model_dump(mode="json"))
        return ExitCode.SUCCESS if check else ExitCode.VERIFICATION_FAILED
    if not (args.cnf and args.nnf):
        raise UsageError("check needs a CNF and an NNF file, or --trace")
    cnf_repo, cnf_name = _located(factory, args.cnf)
    f = await cnf_repo.load_cnf(cnf_name)
    nnf_repo, nnf_name = _located(factory, args.nnf)
    circuit: StrDnnf = await nnf_repo.load_circuit(nnf_name, factory.manager_pool(strict=False))
    shape = validate(circuit)
    if not shape:
        _emit({"equal": False, "circuit": shape.model_dump(mode="json")})
        return ExitCode.VERIFICATION_FAILED
    verdict = check_equivalent(
        circuit,
        f,
        f.universe | circuit.vtree.variables,
        max_vars=config.oracle_max_vars,
        samples=config.sample_count,
        seed=config.sample_seed,
    )
    _emit({
        "equal": verdict.equal,
        "method": verdict.method,
        "counterexample": verdict.counterexample,
    })
    return ExitCode.SUCCESS if verdict else ExitCode.VERIFICATION_FAILED


HANDLERS: dict[Command, Handler] = {
    Command.GEN: _gen,
    Command.COMPILE: _compile,
    Command.PARTITION: _partition,
    Command.BENCH: _bench,
    Command.WITNESS: _witness,
    Command.CHECK: _check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sdnnf-lab", description="str-DNNF compilation laboratory.")
    parser.add_argument("--limit", type=int, help="Edge ceiling per circuit (SDNNF_LIMIT)")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    parser.add_argument("--log-format", choices=["console", "json"])
    parser.add_argument("--record", help="Write the run configuration and outcome as JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    charges = [o.value for o in generators.ChargeOption]
    shapes = [s.value for s in VtreeShape]

    gen = sub.add_parser(Command.GEN.value, help="Generate a charged graph and its Tseitin CNF")
    gen.add_argument("family", help=f"One of {sorted(GRAPH_ARITY)}")
    gen.add_argument("params", type=int, nargs="+", help="Size parameters")
    gen.add_argument("--charges", type=_choice, default="all_zero",
                     choices=charges)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", help="Output prefix for .graph and .cnf")

    comp = sub.add_parser(Command.COMPILE.value, help="Compile a DIMACS CNF bottom-up")
    comp.add_argument("cnf")
    comp.add_argument("--vtree", type=_choice, default=VtreeShape.BALANCED.value, choices=shapes)
    comp.add_argument("--clause-order", type=_choice, default=ClauseOrder.INPUT.value,
                      choices=[o.value for o in ClauseOrder])
    comp.add_argument("--apply-order", type=_choice, default=ApplyOrder.SEQUENTIAL.value,
                      choices=[o.value for o in ApplyOrder])
    comp.add_argument("--restructure-to", type=_choice, choices=shapes)
    comp.add_argument("--seed", type=int)
    comp.add_argument("--trace-out", help="Output prefix for the trace and its circuits")
    comp.add_argument("--validate", action="store_true", help="Check every trace step")
    comp.add_argument("--no-verify", action="store_true", help="Skip the final equivalence check")

    part = sub.add_parser(Command.PARTITION.value, help="Partition a graph")
    part.add_argument("graph")
    part.add_argument("--mode", default="theorem4", choices=PARTITION_MODES)
    part.add_argument("--seed", type=int)
    part.add_argument("--out", help="Write the partition report as JSON")
    _add_param_flags(part)

    bench = sub.add_parser(Command.BENCH.value, help="Benchmark strategies over a family")
    bench.add_argument("family", choices=sorted(generators.FAMILIES))
    bench.add_argument("low", type=int)
    bench.add_argument("high", type=int)
    bench.add_argument("--strategies", help="Comma-separated shape/clause_order/apply_order")
    bench.add_argument("--charges", type=_choice, default="target_unsat",
                       choices=charges)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--jobs", type=int, help="Concurrent runs")
    bench.add_argument("--csv", default="bench.csv")
    bench.add_argument("--svg", help="Log-scale plot of the sizes")
    bench.add_argument("--no-verify", action="store_true")

    wit = sub.add_parser(Command.WITNESS.value, help="Extract a satisfiable witness")
    wit.add_argument("graph")
    wit.add_argument("trace")
    wit.add_argument("--cnf", help="Formula the trace must compile")
    wit.add_argument("--seed", type=int)
    wit.add_argument("--out", default="witness", help="Output prefix")
    _add_param_flags(wit)

    chk = sub.add_parser(Command.CHECK.value, help="Oracle equivalence or trace validation")
    chk.add_argument("cnf", nargs="?")
    chk.add_argument("nnf", nargs="?")
    chk.add_argument("--trace", help="Validate a trace file instead")
    return parser


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--relaxed", action="store_true", help="Use desk-scale partition constants")
    p.add_argument("--gamma", default="1/3", help="gamma for --relaxed")
    p.add_argument("--side-bound", type=int, help="Treewidth target per side (--relaxed)")


def _run_config(args: argparse.Namespace, config: LabConfig) -> RunConfig:
    command = Command(args.command)
    skip = {"command", "limit", "log_level", "log_format", "record", "seed"}
    paths = {"cnf", "nnf", "graph", "trace"}
    outputs = {"out", "trace_out", "csv", "svg"}
    values = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    return RunConfig(
        command=command,
        randomized=_is_randomized(args),
        seed=getattr(args, "seed", None),
        limit=config.limit,
        strict=config.strict_checks,
        inputs={k: str(v) for k, v in values.items() if k in paths},
        outputs={k: str(v) for k, v in values.items() if k in outputs},
        options={k: v for k, v in values.items() if k not in paths | outputs},
    )


async def _dispatch(args: argparse.Namespace, config: LabConfig) -> int:
    started = datetime.now(UTC)
    async with LabFactory(config) as factory:
        try:
            run = _run_config(args, config)
        except ValueError as exc:
            sys.stderr.write(f"usage error: {exc}\n")
            return ExitCode.USAGE
        structlog.contextvars.bind_contextvars(command=run.command.value)
        error: str | None = None
        try:
            code = await HANDLERS[run.command](args, factory, run)
        except InvariantViolation as exc:
            code, error = ExitCode.VERIFICATION_FAILED, str(exc)
        except ResourceLimitExceeded as exc:
            code, error = ExitCode.ABORTED, str(exc)
        except (
            UsageError, PreconditionError, NotARefutation, FormatError, FileNotFoundError,
            ValueError,
        ) as exc:
            code, error = ExitCode.USAGE, str(exc)
        except LabError as exc:
            code, error = ExitCode.VERIFICATION_FAILED, str(exc)
        finally:
            structlog.contextvars.unbind_contextvars("command")
        if error is not None:
            sys.stderr.write(f"error: {error}\n")
        run = run.finished(code, started, error)
        if args.record:
            repo, name = _located(factory, args.record)
            await repo.save_report(name, run)
        logger.info(
            "run_finished",
            command=run.command.value,
            exit_code=int(code),
            duration_ms=run.duration_ms,
        )
        return int(code)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return int(ExitCode.USAGE)

    overrides: dict[str, Any] = {}
    if args.limit is not None:
        if args.limit <= 0:
            sys.stderr.write("usage error: --limit must be positive\n")
            return int(ExitCode.USAGE)
        overrides["limit"] = args.limit
    if args.log_level:
        overrides["log_level"] = args.log_level
    if args.log_format:
        overrides["log_format"] = args.log_format
    config = LabConfig(**overrides)
    try:
        configure_logging(config.log_level, config.log_format)
    except ValueError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return int(ExitCode.USAGE)
    return anyio.run(_dispatch, args, config)


if __name__ == "__main__":
    sys.exit(main())
