"""Exception hierarchy shared by every module of the package."""


class SemitoricError(Exception):
    pass


class DegenerateVector(SemitoricError, ValueError):
    pass


class EmptyInterior(SemitoricError, ValueError):
    pass


class EmptySlice(SemitoricError, ValueError):
    pass


class UnboundedSlice(SemitoricError, ValueError):
    pass


class PointNotOnBoundary(SemitoricError, ValueError):
    pass


class NonConvexImage(SemitoricError, ValueError):
    pass


class SignsNotNormalized(SemitoricError, ValueError):
    pass


class ComplexityTooLarge(SemitoricError, ValueError):
    pass


class NotAdmissible(SemitoricError, ValueError):
    pass


class NotCanonicalizable(SemitoricError, ValueError):
    pass


class InvalidIngredients(SemitoricError, ValueError):
    pass


class IncomparableTruncation(SemitoricError, ValueError):
    pass


class OriginSingularity(SemitoricError, ValueError):
    pass


class NotClosed(SemitoricError, ValueError):
    pass


class IllConditioned(SemitoricError, ValueError):
    pass


class WindowRequired(SemitoricError, ValueError):
    pass


class DegenerateGeometry(SemitoricError, ValueError):
    pass


class UndecomposableTransition(SemitoricError, ValueError):
    pass


class CutNotCovered(SemitoricError, ValueError):
    pass


class ParseError(SemitoricError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
