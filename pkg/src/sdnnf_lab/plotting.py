"""Benchmark plots: circuit size against the family parameter, log-scale y."""
from collections import defaultdict
from collections.abc import Iterable
from pathlib import Path

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import structlog  # noqa: E402

from sdnnf_lab.models.reports import BenchmarkRecord  # noqa: E402

logger = structlog.get_logger(__name__)

PLOT_FIELDS = ("max_intermediate", "final_size")

plt.rcParams["figure.figsize"] = (6.0, 4.0)
plt.rcParams["savefig.bbox"] = "tight"
plt.rcParams["svg.fonttype"] = "none"
plt.rcParams["axes.spines.top"] = False
plt.rcParams["axes.spines.right"] = False


def metric_for(satisfiable: bool) -> str:
    """Refutations are judged by their largest step, satisfiable runs by the result."""
    return "final_size" if satisfiable else "max_intermediate"


def series(
    records: Iterable[BenchmarkRecord], field: str
) -> dict[str, list[tuple[int, int, bool]]]:
    """Points (n, value, aborted) per strategy, sorted by n."""
    if field not in PLOT_FIELDS:
        raise ValueError(f"cannot plot {field!r}; expected one of {PLOT_FIELDS}")
    by_strategy: dict[str, list[tuple[int, int, bool]]] = defaultdict(list)
    for r in records:
        by_strategy[r.strategy].append((r.n, int(getattr(r, field)), r.aborted))
    return {name: sorted(points) for name, points in sorted(by_strategy.items())}


def plot_benchmark(
    records: Iterable[BenchmarkRecord],
    out: Path | str,
    field: str = "max_intermediate",
    title: str | None = None,
) -> Path:
    """Draw one line per strategy and save the figure; format follows the suffix.

    Sizes below 1 are drawn at 1 so the constant circuits stay on a log axis.
    Aborted runs get hollow markers.
    """
    records = list(records)
    if not records:
        raise ValueError("no benchmark records to plot")
    data = series(records, field)
    out = Path(out)

    fig, ax = plt.subplots()
    try:
        for name, points in data.items():
            ns = [n for n, _, _ in points]
            values = [max(v, 1) for _, v, _ in points]
            (line,) = ax.plot(ns, values, marker="o", label=name)
            hollow = [(n, max(v, 1)) for n, v, aborted in points if aborted]
            if hollow:
                ax.scatter(
                    [n for n, _ in hollow],
                    [v for _, v in hollow],
                    s=80,
                    facecolors="none",
                    edgecolors=line.get_color(),
                    zorder=3,
                )
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel(field.replace("_", " ") + " (edges)")
        ax.set_xticks(sorted({r.n for r in records}))
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small", frameon=False)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format=out.suffix.lstrip(".") or "svg")
    finally:
        plt.close(fig)

    logger.info("plot_saved", path=str(out), field=field, strategies=len(data))
    return out
