"""Exception hierarchy for the str-DNNF laboratory."""


class LabError(Exception):
    """Base class for every error raised by sdnnf_lab."""


class FormatError(LabError, ValueError):
    """Malformed text input (DIMACS, vtree, NNF, graph or trace files)."""

    def __init__(self, fmt: str, message: str, line: int | None = None):
        self.fmt = fmt
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{fmt}: {message}{where}")


class VtreeMismatchError(LabError, ValueError):
    """Two circuits were combined although their vtrees differ."""


class OracleLimitError(LabError, ValueError):
    """A brute-force query was asked over too many variables."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"universe of {size} variables exceeds oracle limit {limit}")


class ResourceLimitExceeded(LabError):
    """A circuit grew past the configured edge ceiling."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"circuit size {size} exceeds edge ceiling {limit}")


class TreewidthTooLarge(LabError):
    """No sparse split exists; the treewidth of the surrounding part is large."""


class PreconditionError(LabError, ValueError):
    """An operation was called outside its domain; `condition` names the check."""

    def __init__(self, condition: str, message: str):
        self.condition = condition
        super().__init__(f"{condition}: {message}")


class SearchBudgetExhausted(LabError):
    """A randomized or exhaustive search gave up."""

    def __init__(self, what: str, trials: int):
        self.what = what
        self.trials = trials
        super().__init__(f"{what}: no witness found after {trials} trials")


class NotARefutation(LabError, ValueError):
    """A trace whose final circuit is satisfiable was used as a refutation."""


class InvariantViolation(LabError, AssertionError):
    """An inline check of a proven bound failed."""

    def __init__(self, name: str, **context: object):
        self.name = name
        self.context = context
        details = ", ".join(f"{k}={v}" for k, v in sorted(context.items()))
        super().__init__(f"{name} violated ({details})")


class UsageError(LabError, ValueError):
    """Bad command-line arguments."""
