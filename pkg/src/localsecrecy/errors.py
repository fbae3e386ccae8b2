"""Exception hierarchy. Everything derives from ValueError so callers can
catch bad-input failures without importing this module."""


class LocalSecrecyError(ValueError):
    pass


class DimensionError(LocalSecrecyError):
    pass


class DistributionError(LocalSecrecyError):
    pass


class NotStrictlyPositiveError(DistributionError):
    pass


class EpsilonRangeError(LocalSecrecyError):
    """Perturbation scale outside ``(0, bound)``."""

    def __init__(self, epsilon, bound):
        self.epsilon = epsilon
        self.bound = bound
        super().__init__(f"epsilon={epsilon!r} outside valid range (0, {bound!r})")


class DeadOutputError(LocalSecrecyError):
    def __init__(self, symbol):
        self.symbol = symbol
        super().__init__(
            f"output symbol {symbol} has zero probability under the given input; "
            "the divergence transfer matrix needs a strictly positive output pmf"
        )


class InvalidFamilyError(LocalSecrecyError):
    pass


class DegradednessError(LocalSecrecyError):
    pass


class LPInfeasibleError(LocalSecrecyError):
    pass


class AlphabetTooLargeError(LocalSecrecyError):
    pass


class ProblemFileError(LocalSecrecyError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
