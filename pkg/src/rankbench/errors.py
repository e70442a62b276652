"""Exception hierarchy.

Everything a caller can mishandle raises a named subclass so the CLI and the
HTTP layer can map failures to exit codes / status codes without string
matching.
"""


class RankbenchError(Exception):
    """Base class for all package errors."""


class ValidationError(RankbenchError):
    """Invalid domain input (bad catalog, weights, matrix, ...)."""


class MissingCriterion(ValidationError):
    pass


class UnknownCriterion(ValidationError):
    pass


class NonPositiveWeight(ValidationError):
    pass


class SumNotOne(ValidationError):
    """Weight vector does not sum to one; carries the offending total."""

    def __init__(self, message: str, total: float):
        super().__init__(message)
        self.total = total


class EmptyColumn(ValidationError):
    pass


class NonPositiveValue(ValidationError):
    pass


class CatalogTooSmall(ValidationError):
    pass


class TooFewEntities(ValidationError):
    pass


class ReciprocityViolation(ValidationError):
    """Pairwise matrix entry pair that is not mutually reciprocal."""

    def __init__(self, message: str, i: int, j: int):
        super().__init__(message)
        self.i = i
        self.j = j


class IdSetMismatch(ValidationError):
    pass


class UnknownMethod(ValidationError):
    pass


class EmptyDocument(ValidationError):
    pass


class EmptyReport(ValidationError):
    pass


class NoConvergence(RankbenchError):
    """Eigenvector iteration hit its cap; carries the last residual."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ParseError(RankbenchError):
    """Document could not be parsed; message carries position info."""


class SchemaVersionUnsupported(ParseError):
    pass


class SinkWriteError(RankbenchError):
    pass
