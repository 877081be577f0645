"""CNF formulas, partial assignments, conditioning and subformula relations.

Variables are positive integers and literals are signed integers (DIMACS
convention). A clause is a tuple of literals sorted by variable; the clause
multiset of a formula keeps parsing order, while `clause_set` gives the set
view the rest of the package reasons about.
"""
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt
import structlog

from sdnnf_lab.errors import FormatError

logger = structlog.get_logger(__name__)

Var = int
Literal = int
Clause = tuple[Literal, ...]
Assignment = Mapping[Var, int]


class SubformulaRelation(str, Enum):
    """Outcome of comparing two clause sets."""
    PROPER = "proper"
    EQUAL = "equal"
    NO = "no"


def make_clause(literals: Iterable[Literal]) -> Clause:
    """Normalize literals into a clause, rejecting complementary pairs."""
    lits = set(literals)
    if 0 in lits:
        raise ValueError("0 is not a literal")
    for lit in lits:
        if -lit in lits:
            raise ValueError(f"clause contains variable {abs(lit)} in both polarities")
    return tuple(sorted(lits, key=abs))


@dataclass(frozen=True, slots=True)
class Cnf:
    """A CNF formula over an explicit variable universe."""

    universe: frozenset[Var]
    clauses: tuple[Clause, ...]
    _variables: frozenset[Var] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        used: set[Var] = set()
        for clause in self.clauses:
            used.update(abs(lit) for lit in clause)
        if not used <= self.universe:
            missing = sorted(used - self.universe)
            raise ValueError(f"clause variables {missing} are outside the universe")
        object.__setattr__(self, "_variables", frozenset(used))

    @classmethod
    def from_clauses(
        cls,
        clauses: Iterable[Iterable[Literal]],
        universe: Iterable[Var] | None = None,
    ) -> "Cnf":
        normalized = tuple(make_clause(c) for c in clauses)
        if universe is None:
            universe = {abs(lit) for c in normalized for lit in c}
        return cls(frozenset(universe), normalized)

    @property
    def variables(self) -> frozenset[Var]:
        """var(F): the variables that occur in some clause."""
        return self._variables

    def clause_set(self) -> frozenset[Clause]:
        return frozenset(self.clauses)

    def distinct_clauses(self) -> tuple[Clause, ...]:
        """Set view of the clauses, in order of first occurrence."""
        return tuple(dict.fromkeys(self.clauses))

    def has_empty_clause(self) -> bool:
        return () in self.clauses

    def evaluate(self, a: Assignment) -> bool:
        """Evaluate under an assignment that is total on var(F)."""
        for clause in self.clauses:
            if not any((a[abs(lit)] == 1) == (lit > 0) for lit in clause):
                return False
        return True

    def evaluate_many(
        self, columns: Mapping[Var, npt.NDArray[np.bool_]], rows: int
    ) -> npt.NDArray[np.bool_]:
        """Vectorized evaluation: one boolean column per variable."""
        result = np.ones(rows, dtype=np.bool_)
        for clause in self.clauses:
            sat = np.zeros(rows, dtype=np.bool_)
            for lit in clause:
                col = columns[abs(lit)]
                sat |= col if lit > 0 else ~col
            result &= sat
        return result


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF text."""
    header: tuple[int, int] | None = None
    clauses: list[Clause] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise FormatError("dimacs", "malformed header", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise FormatError("dimacs", "malformed header", lineno) from exc
            if header[0] < 0 or header[1] < 0:
                raise FormatError("dimacs", "negative header counts", lineno)
            continue
        if header is None:
            raise FormatError("dimacs", "clause before header", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError as exc:
                raise FormatError("dimacs", f"bad literal {token!r}", lineno) from exc
            if lit == 0:
                try:
                    clauses.append(make_clause(current))
                except ValueError as exc:
                    raise FormatError("dimacs", str(exc), lineno) from exc
                current = []
            elif abs(lit) > header[0]:
                raise FormatError("dimacs", f"variable {abs(lit)} exceeds {header[0]}", lineno)
            else:
                current.append(lit)
    if header is None:
        raise FormatError("dimacs", "missing header")
    if current:
        raise FormatError("dimacs", "unterminated clause")
    if len(clauses) != header[1]:
        raise FormatError("dimacs", f"header announces {header[1]} clauses, found {len(clauses)}")
    cnf = Cnf(frozenset(range(1, header[0] + 1)), tuple(clauses))
    logger.debug("dimacs_parsed", variables=header[0], clauses=len(clauses))
    return cnf


def to_dimacs(f: Cnf) -> str:
    n = max(f.universe, default=0)
    lines = [f"p cnf {n} {len(f.clauses)}"]
    lines.extend(" ".join([*map(str, clause), "0"]) for clause in f.clauses)
    return "\n".join(lines) + "\n"


def condition_clause(clause: Clause, a: Assignment) -> Clause | None:
    """C|a, or None when a satisfies C."""
    kept: list[Literal] = []
    for lit in clause:
        value = a.get(abs(lit))
        if value is None:
            kept.append(lit)
        elif (value == 1) == (lit > 0):
            return None
    return tuple(kept)


def condition(f: Cnf, a: Assignment) -> Cnf:
    """F|a. Empty clauses are kept, they mark unsatisfiability."""
    outside = set(a) - f.universe
    if outside:
        raise ValueError(f"assignment variables {sorted(outside)} are outside the universe")
    clauses = tuple(
        c for c in (condition_clause(clause, a) for clause in f.clauses) if c is not None
    )
    return Cnf(f.universe.difference(a), clauses)


def is_subformula(f: Cnf, g: Cnf) -> SubformulaRelation:
    if f.universe != g.universe:
        raise ValueError("subformula comparison needs a common universe")
    fs, gs = f.clause_set(), g.clause_set()
    if fs == gs:
        return SubformulaRelation.EQUAL
    if fs < gs:
        return SubformulaRelation.PROPER
    return SubformulaRelation.NO


def augment_with_fresh_variable(f: Cnf) -> tuple[Cnf, Var]:
    """Add one fresh positive literal to every clause.

    The result is satisfiable, and conditioning it on the fresh variable
    set to 0 gives back F.
    """
    fresh = max(f.universe, default=0) + 1
    clauses = tuple(make_clause((*clause, fresh)) for clause in f.clauses)
    return Cnf(f.universe | {fresh}, clauses), fresh
