"""Exception types shared across the package."""


class HypothesisViolation(ValueError):
    """A theorem's hypothesis does not hold for the given input.

    This is not a "not critical" verdict: it means the structural
    characterization says nothing about the input.
    """


class ModulusMismatch(ValueError):
    """Operands live in different groups."""


class BudgetExceeded(ValueError):
    """A sweep would enumerate more pairs than the configured cap."""

    def __init__(self, estimated: int, cap: int):
        self.estimated = estimated
        self.cap = cap
        super().__init__(
            f"estimated {estimated} pairs exceeds budget of {cap}; narrow the size filters"
        )


class CheckpointError(RuntimeError):
    """A checkpoint file is corrupt or belongs to a different sweep."""
