"""Exception hierarchy.

Two families: ``DataError`` for bad or incompatible input, ``DegeneracyError``
for inputs that are well formed but leave an index mathematically undefined.
The command line maps them to exit codes 2 and 3.
"""


class ComplexityError(Exception):
    pass


class DataError(ComplexityError, ValueError):
    pass


class DegeneracyError(ComplexityError, ArithmeticError):
    pass


class EmptyMatrix(DataError):
    pass


class NoOverlap(DataError):
    pass


class AllZeroRow(DataError):
    pass


class LengthMismatch(DataError):
    pass


class InsufficientOverlap(DataError):
    pass


class UnknownYear(DataError):
    pass


class BadShares(DataError):
    pass


class SchemeMismatch(DataError):
    pass


class DuplicateEntity(DataError):
    pass


class ParseError(DataError):
    """Malformed input file. ``line`` is 1-based, counting the header."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class DegenerateSpectrum(DegeneracyError):
    pass


class DegenerateIndex(DegeneracyError):
    pass


class NoRealEigenvalue(DegeneracyError):
    pass


class NoConvergence(DegeneracyError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class ZeroVariance(DegeneracyError):
    pass


class SpectralWarning(UserWarning):
    """Eigenvalue selection had to skip or could not separate candidates."""
