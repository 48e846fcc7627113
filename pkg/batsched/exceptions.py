"""Exceptions raised by batsched.

Every error derives from ``BatschedError``; input problems additionally
derive from ``ValueError`` so that callers catching the built-in keep
working.
"""


class BatschedError(Exception):
    """Base class of all batsched errors."""


class InvalidArgumentError(BatschedError, ValueError):
    """A scalar argument or mapping passed to an operation is invalid."""


class InvalidGraphError(BatschedError, ValueError):
    """A task graph violates one or more structural invariants.

    Parameters
    ----------
    violations : list of str
        Human readable description of every violated invariant
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "Invalid task graph:\n" + "\n".join(f"  - {v}" for v in self.violations)
        )


class GraphFileError(BatschedError, ValueError):
    """A graph or profile file could not be parsed."""


class DeadlineInfeasibleError(BatschedError):
    """The deadline cannot be met by any design-point assignment."""


class WindowInfeasibleError(DeadlineInfeasibleError):
    """A single design-point window cannot produce an assignment that meets
    the deadline."""


class OracleBudgetError(BatschedError):
    """The exhaustive oracle was asked to enumerate too many configurations."""
