"""Exception hierarchy.

Three families matter to callers (and to the CLI exit codes): parse errors
from graph files, validation errors from bad inputs, and numerical errors
that indicate corrupted data rather than user mistakes.
"""

from __future__ import annotations


class LeaderSelectionError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LeaderSelectionError, ValueError):
    """Malformed graph file. Carries the location of the offending token."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif field is not None:
            where = f" (field {field!r})"
        super().__init__(message + where)


class ValidationError(LeaderSelectionError, ValueError):
    """Structurally invalid input (graph, leader set, or budget).

    Also a ValueError so library users can catch bad inputs generically.
    """


class DisconnectedGraph(ValidationError):
    def __init__(self, unreachable: int, label=None):
        self.unreachable = unreachable
        name = label if label is not None else unreachable
        super().__init__(f"graph is not connected: node {name!r} is unreachable from node 0")


class SelfLoop(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"self-loop on node {node}")


class DuplicateEdge(ValidationError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"duplicate edge ({i}, {j})")


class NonPositiveKappa(ValidationError):
    def __init__(self, node: int, value: float, label=None):
        self.node = node
        self.value = value
        name = label if label is not None else node
        super().__init__(f"attachment gain for node {name!r} must be > 0, got {value!r}")


class NonPositiveWeight(ValidationError):
    def __init__(self, i: int, j: int, value: float):
        self.pair = (i, j)
        self.value = value
        super().__init__(f"edge ({i}, {j}) has non-positive weight {value!r}")


class IndexOutOfRange(ValidationError):
    def __init__(self, index, n: int, what: str = "node"):
        self.index = index
        self.n = n
        super().__init__(f"{what} index {index!r} out of range [0, {n})")


class EmptyLeaderSet(ValidationError):
    def __init__(self, message: str = "leader set must be nonempty"):
        super().__init__(message)


class AlreadyLeader(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} is already a leader")


class NotALeader(ValidationError):
    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} is not a leader")


class InvalidBudget(ValidationError):
    def __init__(self, k: int, n: int):
        self.k = k
        self.n = n
        super().__init__(f"budget k={k} must satisfy 1 <= k <= {n}")


class SearchSpaceTooLarge(ValidationError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"exhaustive search over {count} subsets exceeds cap {cap}")


class TooLargeForExhaustive(ValidationError):
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"exhaustive enumeration requires n <= {limit}, got n={n}")


class WrongAlgorithm(ValidationError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"certificate requires a {expected} report, got {got!r}")


class InvalidNesting(ValidationError):
    def __init__(self, message: str):
        super().__init__(message)


class InvalidSimulationConfig(ValidationError):
    def __init__(self, message: str):
        super().__init__(message)


class NumericalError(LeaderSelectionError):
    """Numerical failure that should be impossible for validated inputs."""


class FactorizationFailure(NumericalError):
    def __init__(self, detail: str):
        super().__init__(f"positive-definite factorization failed: {detail}")


class DegenerateUpdate(NumericalError):
    def __init__(self, detail: str):
        super().__init__(f"low-rank inverse update is singular to working precision: {detail}")


class UnstableStepSize(NumericalError):
    def __init__(self, dt: float, lam_max: float):
        self.dt = dt
        self.lam_max = lam_max
        super().__init__(
            f"step size dt={dt!r} violates dt * lambda_max = {dt * lam_max!r} < 2"
        )
