"""Exception types shared across the package."""


class MafrfsError(Exception):
    """Base class for all package errors."""


class DataError(MafrfsError):
    """Dataset cannot be loaded or violates a structural requirement."""


class ParseError(DataError):
    """A cell failed numeric parsing. Carries 1-based row/column positions."""

    def __init__(self, row, col, message=""):
        self.row = row
        self.col = col
        super().__init__(message or f"unparseable numeric cell at row {row}, column {col}")


class EmptyClassInFold(DataError):
    """A cross-validation fold's training split is missing a class."""

    def __init__(self, fold, class_index):
        self.fold = fold
        self.class_index = class_index
        super().__init__(f"fold {fold}: class {class_index} has no training samples")


class ConfigHashMismatch(DataError):
    """Stored rankings were produced under a different run configuration."""


class PerfectConsistency(MafrfsError):
    """Friedman statistic is undefined: chi^2 equals N(s-1)."""

    def __init__(self, chi_sq):
        self.chi_sq = chi_sq
        super().__init__(
            f"Friedman F statistic undefined: chi^2 = {chi_sq} equals N(s-1) "
            "(all datasets rank the algorithms identically)"
        )
