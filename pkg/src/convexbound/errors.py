"""Exception hierarchy shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit-raised errors."""


class ParseError(ToolkitError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
        self.reason = message


class DomainError(ToolkitError):
    """Evaluation left the mathematical domain of some node."""


class NonDifferentiableError(ToolkitError):
    """Symbolic differentiation hit a kinked node (max, abs)."""


class PreconditionError(ToolkitError):
    """A required certificate or argument condition is missing."""


class BudgetExceededError(ToolkitError):
    """An adaptive scheme ran out of its configured work budget."""


class GenerationError(ToolkitError):
    """A random-function generator repeatedly failed certification."""
