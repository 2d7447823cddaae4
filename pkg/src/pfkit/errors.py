"""Exception hierarchy shared by every pfkit module."""

from __future__ import annotations


class PfkitError(Exception):
    """Base class for all library errors."""


class DescriptorMismatch(PfkitError, TypeError):
    """Operands live in different rings."""


class NonUnit(PfkitError, ArithmeticError):
    """Inverse requested for an element that is not a unit."""


class UnsupportedDescriptor(PfkitError):
    """The ring descriptor does not support the requested operation."""


class UnsupportedOracle(PfkitError):
    """No membership oracle covers the ring/generator combination."""


class ParseError(PfkitError, ValueError):
    """Malformed text input (element, descriptor, or file)."""


class NotMember(PfkitError, ValueError):
    """A ring value lies outside the partial field."""

    def __init__(self, value, message: str | None = None):
        self.value = value
        super().__init__(message or f"{value} is not a member of the partial field")


class UndefinedSum(PfkitError, ArithmeticError):
    """The ring sum exists but leaves the group together with zero."""

    def __init__(self, value, message: str | None = None):
        self.value = value
        super().__init__(message or f"sum is undefined: ring value {value} is not in the group or zero")


class NotFundamental(PfkitError, ValueError):
    """An element outside the fundamental set was used where one is required."""

    def __init__(self, value):
        self.value = value
        super().__init__(f"{value} is not a fundamental element")


class NonExhaustiveFun(PfkitError):
    """An operation needs a provably complete fundamental set."""


class DimensionMismatch(PfkitError, ValueError):
    pass


class OverlappingSets(PfkitError, ValueError):
    pass


class ZeroPivot(PfkitError, ValueError):
    pass


class UndefinedEntry(PfkitError, ArithmeticError):
    def __init__(self, row, col, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"entry ({row}, {col}) = {value} is not in the partial field")


class UndefinedDeterminant(PfkitError, ArithmeticError):
    def __init__(self, rows, cols, value):
        self.rows, self.cols, self.value = tuple(rows), tuple(cols), value
        super().__init__(f"determinant of rows {self.rows} / cols {self.cols} is {value}, not in the partial field")


class NotAForest(PfkitError, ValueError):
    pass


class NotACycle(PfkitError, ValueError):
    pass


class TooManyCycles(PfkitError):
    pass


class InvalidMatrix(PfkitError, ValueError):
    pass


class NotABasis(PfkitError, ValueError):
    pass


class TooLarge(PfkitError):
    pass


class NotAHomomorphism(PfkitError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class SourceMismatch(PfkitError, ValueError):
    pass


class NoLocalLift(PfkitError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class DepthExceeded(PfkitError):
    def __init__(self, message: str, explored: int = 0):
        self.explored = explored
        super().__init__(message)


class ConditionFailed(PfkitError):
    def __init__(self, index: int, witness, report=None):
        self.index, self.witness, self.report = index, witness, report
        super().__init__(f"condition ({index}) fails: {witness}")


class ShapeMismatch(PfkitError, ValueError):
    pass
