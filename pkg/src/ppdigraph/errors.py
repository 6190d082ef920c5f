"""Exception hierarchy shared by all modules.

Resource errors are deliberately split in two: ``BudgetExceeded`` means a
construction would allocate more vertices than allowed, ``BudgetExhausted``
means a backtracking search hit its node cap.  The latter is a third outcome
next to "yes" and "no" and must never be conflated with "no".
"""


class PpdigraphError(Exception):
    """Base class for every error raised by this package."""


class EmptyVertexSet(PpdigraphError):
    """A digraph must have at least one vertex."""


class EndpointOutOfRange(PpdigraphError):
    """An edge endpoint does not lie in [0, n)."""


class SizeTooSmall(PpdigraphError):
    """A generated family member was requested below its minimum size."""


class EmptyList(PpdigraphError):
    """A nonempty list of digraphs was required."""


class BudgetExceeded(PpdigraphError):
    """A product or power construction would exceed the vertex budget."""

    def __init__(self, required: int, budget: int, what: str = "vertices"):
        self.required = required
        self.budget = budget
        super().__init__(f"construction needs {required} {what}, budget is {budget}")


class BudgetExhausted(PpdigraphError):
    """A search hit its node limit; the answer is unknown, not 'no'."""

    def __init__(self, node_limit: int):
        self.node_limit = node_limit
        super().__init__(f"search exhausted its node budget of {node_limit}")


class PinOutOfRange(PpdigraphError):
    """A partial-map pin names a vertex outside the allowed range."""


class ParseError(PpdigraphError):
    """Malformed textual input; carries a 1-based position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class FormatUnsupported(PpdigraphError):
    """The requested serialization direction is not supported for this format."""


class ArityMismatch(PpdigraphError):
    """A function symbol was used with two different arities."""


class UnknownBuiltin(PpdigraphError):
    """No builtin minor condition with that name exists."""


class ConstantOutOfRange(PpdigraphError):
    """A formula constant names a vertex the base digraph does not have."""


class NotACore(PpdigraphError):
    """The operation requires its input digraph to be a core."""


class TooFewVertices(PpdigraphError):
    """The operation requires a digraph with more vertices."""


class IsTotallyRectangular(PpdigraphError):
    """The construction needs a rectangularity failure but none exists."""


class InternalInconsistency(PpdigraphError):
    """Sentinel for states the underlying theory rules out; indicates a bug."""
