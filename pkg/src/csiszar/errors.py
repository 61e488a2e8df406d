"""Exception hierarchy shared by every module."""


class CsiszarError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CsiszarError, ValueError):
    """An argument lies outside the set where an operation is defined."""


class EvaluationError(DomainError):
    """A core function produced a non-finite value (ln 0, 1/0, overflow)."""


class IndeterminateFormError(DomainError):
    """A sum would have to combine +inf and -inf."""


class ConvergenceError(CsiszarError, RuntimeError):
    """The eigensolver hit its sweep cap."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class ParseError(CsiszarError, ValueError):
    """Malformed core-function expression.

    ``offset`` is a 0-based character offset into the source text; it equals
    ``len(source)`` when the input ended too early.
    """

    def __init__(self, source, offset, expected, found):
        self.source = source
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {offset}: expected {expected}, found {found!r}")

    def render(self):
        """Two-line rendering with a caret under the offending character."""
        return f"{self.source}\n{' ' * self.offset}^ expected {self.expected}, found {self.found!r}"
