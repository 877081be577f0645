"""Clause orders and apply schedules for bottom-up compilation."""
from collections.abc import Callable, Sequence

import numpy as np

from sdnnf_lab.logic.cnf import Clause
from sdnnf_lab.models.strategy import ApplyOrder, ClauseOrder

Conjoin = Callable[[int, int], int]
SizeOf = Callable[[int], int]


def clause_groups(
    clauses: Sequence[Clause],
    order: ClauseOrder,
    sizes: Sequence[int],
    seed: int = 0,
) -> list[list[int]]:
    """Clause indices in compilation order, split into groups reduced separately.

    Only GROUP_BY_VERTEX yields more than one group: clauses over the same
    variable set (the clauses of one Tseitin constraint) form a group, in
    order of first occurrence.
    """
    indices = list(range(len(clauses)))
    match order:
        case ClauseOrder.INPUT:
            return [indices]
        case ClauseOrder.RANDOM:
            rng = np.random.default_rng(seed)
            return [[int(i) for i in rng.permutation(len(clauses))]]
        case ClauseOrder.GREEDY_MIN_SIZE:
            return [sorted(indices, key=lambda i: (sizes[i], i))]
        case ClauseOrder.GROUP_BY_VERTEX:
            groups: dict[frozenset[int], list[int]] = {}
            for i, clause in enumerate(clauses):
                groups.setdefault(frozenset(abs(lit) for lit in clause), []).append(i)
            return list(groups.values())
    raise ValueError(f"unknown clause order {order!r}")


def reduce(items: Sequence[int], order: ApplyOrder, conjoin: Conjoin, size: SizeOf) -> int:
    """Conjoin the circuits of `items` down to one; returns the final step index."""
    if not items:
        raise ValueError("nothing to conjoin")
    match order:
        case ApplyOrder.SEQUENTIAL:
            acc = items[0]
            for item in items[1:]:
                acc = conjoin(acc, item)
            return acc
        case ApplyOrder.BALANCED_TREE:
            level = list(items)
            while len(level) > 1:
                paired = [conjoin(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
                if len(level) % 2:
                    paired.append(level[-1])
                level = paired
            return level[0]
        case ApplyOrder.GREEDY_MIN_PAIR:
            live = sorted(items)
            while len(live) > 1:
                _, j, k = min(
                    (size(j) * size(k), j, k)
                    for x, j in enumerate(live)
                    for k in live[x + 1 :]
                )
                live.remove(j)
                live.remove(k)
                live.append(conjoin(j, k))
            return live[0]
    raise ValueError(f"unknown apply order {order!r}")
