"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SupertrussError(Exception):
    """Base class for every error raised by this package."""


class AmbientMismatch(SupertrussError, ValueError):
    """Operands live in different algebras (generator set, field, arity or n)."""


class NotInvertible(SupertrussError, ArithmeticError):
    pass


class WellDefinednessError(SupertrussError):
    """A generator assignment does not define a superalgebra homomorphism."""

    def __init__(self, generator: str, message: str):
        super().__init__(f"{message} (generator {generator!r})")
        self.generator = generator


class ParityViolation(WellDefinednessError):
    pass


class GrassmannRelationViolation(WellDefinednessError):
    pass


class InvertibilityViolation(WellDefinednessError):
    pass


class MissingMap(SupertrussError):
    """An optional structure map (counit, cozero) is required but absent."""


class MissingCounit(MissingMap):
    pass


class InfiniteBase(SupertrussError):
    """Exhaustive enumeration was requested over an infinite field."""


class InfinitePointSet(InfiniteBase):
    pass


class BudgetExceeded(SupertrussError):
    """An exhaustive run would exceed the tuple-evaluation budget."""


class NotMultiplicative(SupertrussError):
    pass


class NotGroupLike(SupertrussError):
    pass


class StxError(SupertrussError):
    """Error in a presentation file, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column
