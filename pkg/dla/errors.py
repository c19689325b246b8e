"""
Exception hierarchy shared by the dla package.
"""


class DLAError(Exception):
    """Base class for every error raised by dla."""


class ParseError(DLAError):
    """
    Raised when a literal or a file does not follow its grammar.

    Args:
        message (str): What went wrong
        line (int): 1-based line number (1 for single-line literals)
        column (int): 1-based column number
    """

    def __init__(self, message, line=1, column=1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

    def shifted(self, line=None, column_offset=0):
        """Return a copy positioned inside a larger text."""
        return ParseError(self.message,
                          line if line is not None else self.line,
                          self.column + column_offset)


class NotDivisible(DLAError):
    pass


class NotFinite(DLAError):
    pass


class InvalidDescriptor(DLAError):
    pass


class InconsistentProfile(DLAError):
    """Raised by certify; `invariant` names the violated rule."""

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class DimensionMismatch(DLAError):
    pass


class ConstructionError(DLAError):
    pass


class UnsupportedConstruction(ConstructionError):
    pass


class NotEmbeddable(ConstructionError):
    pass


class EpsilonBoundViolated(ConstructionError):
    pass


class TargetTooSmall(ConstructionError):
    pass


class WitnessRejected(ConstructionError):
    """Raised when a built diagram fails its own verification."""


class InvalidWeight(DLAError):
    pass


class OracleTooLarge(DLAError):
    pass
