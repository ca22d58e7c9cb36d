"""Exception types shared across the package.

Every error raised on purpose by the library derives from CountDiffError so the
command line front end can report it by class name.
"""


class CountDiffError(Exception):
    """Base class; ``str(type(e).__name__)`` is what the CLI prints."""


# polynomial layer
class ConstantPolynomial(CountDiffError):
    pass


class NotReducible(CountDiffError):
    pass


class ZeroInput(CountDiffError):
    pass


class ConstantInV(CountDiffError):
    pass


class InexactDivision(CountDiffError):
    pass


# counting ring
class NegativeExponent(CountDiffError):
    pass


class HasAleph(CountDiffError):
    pass


class ZeroPolynomial(CountDiffError):
    pass


class NotIntegerValued(CountDiffError):
    pass


# sigma systems / decomposition
class ConstantMember(CountDiffError):
    pass


class NotWeaklyTriangular(CountDiffError):
    pass


class UncertifiedSystem(CountDiffError):
    pass


class CoefficientNotReducible(CountDiffError):
    pass


# differential layer
class PoleAtExpansionPoint(CountDiffError):
    pass


class VanishingInitialOrSeparant(CountDiffError):
    pass


class NotSimple(CountDiffError):
    pass


class DegreeExceedsN(CountDiffError):
    pass


class TooManyLeaders(CountDiffError):
    pass


class FitFailure(CountDiffError):
    pass


# text formats
class ParseError(CountDiffError):
    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
