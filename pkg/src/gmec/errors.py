"""Exception types shared across the package."""

from __future__ import annotations


class GmecError(Exception):
    """Base class for every error raised by this package."""


class UnknownPlaceError(GmecError):
    def __init__(self, place: str):
        super().__init__(f"unknown place {place!r}")
        self.place = place


class UnknownTransitionError(GmecError):
    def __init__(self, transition: str):
        super().__init__(f"unknown transition {transition!r}")
        self.transition = transition


class InvalidNetError(GmecError):
    """Raised when an operation requires a structurally valid net."""

    def __init__(self, issues):
        self.issues = tuple(issues)
        detail = "; ".join(str(i) for i in self.issues)
        super().__init__(f"net fails validation: {detail}")


class NotEnabledError(GmecError):
    def __init__(self, transition: str, marking):
        super().__init__(f"transition {transition!r} is not enabled at {marking}")
        self.transition = transition
        self.marking = marking


class NegativeWeightError(GmecError):
    """Constraint weights must be nonnegative."""


class CapExceededError(GmecError):
    """A configured resource cap was hit before the computation finished.

    ``reason`` is one of ``"max-markings"``, ``"max-tokens"`` or
    ``"max-members"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        msg = f"resource cap exceeded ({reason})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.reason = reason


class LikelyUnboundedError(GmecError):
    """Exploration found a marking strictly dominating one of its ancestors,
    which proves tokens can be pumped without limit."""

    def __init__(self, marking, ancestor):
        super().__init__(
            f"net appears unbounded: {marking} strictly dominates ancestor {ancestor}"
        )
        self.marking = marking
        self.ancestor = ancestor


class NotUncontrollableError(GmecError):
    def __init__(self, transition: str):
        super().__init__(f"transition {transition!r} is not uncontrollable")
        self.transition = transition


class GainNotPositiveError(GmecError):
    def __init__(self, transition: str, gain: int):
        super().__init__(
            f"complement weight set requires a positive gain at {transition!r}, got {gain}"
        )
        self.transition = transition
        self.gain = gain


class NonConvergenceError(GmecError):
    """The iterated transformation did not reach weak admissibility.

    ``constraints`` holds the last constraint set; ``rounds`` the number of
    sweeps performed; ``cycle`` is true when the same set recurred.
    """

    def __init__(self, rounds: int, constraints, cycle: bool = False):
        why = "constraint set recurred" if cycle else f"no convergence in {rounds} sweeps"
        super().__init__(f"transformation did not converge: {why}")
        self.rounds = rounds
        self.constraints = constraints
        self.cycle = cycle


class PermutationCapExceededError(GmecError):
    def __init__(self, count: int, cap: int):
        super().__init__(
            f"{count} positive-gain uncontrollable transitions exceed the permutation cap {cap}"
        )
        self.count = count
        self.cap = cap


class DocumentError(GmecError):
    """A net document failed to parse (message carries position or path)."""


class NoConstraintError(GmecError):
    def __init__(self, index: int, available: int):
        if available == 0:
            msg = "document declares no constraints"
        else:
            msg = f"constraint index {index} out of range (document has {available})"
        super().__init__(msg)
        self.index = index
        self.available = available
