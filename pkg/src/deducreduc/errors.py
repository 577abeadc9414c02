"""Exception types raised across the package."""


class DeducReducError(Exception):
    """Base class for all package errors."""


class UncoveredVariable(DeducReducError, KeyError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"assignment does not cover x{variable}")

    def __str__(self):
        return self.args[0]


class TooManyVariables(DeducReducError, ValueError):
    pass


class ParseError(DeducReducError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvalidProduct(DeducReducError, ValueError):
    pass


class InfeasibleWidths(DeducReducError, ValueError):
    pass


class Infeasible(DeducReducError):
    """The equation system admits no solution (often a wrong bit-length guess)."""


class NoPlausibleStates(Infeasible):
    pass


class DegreeViolation(DeducReducError, ValueError):
    pass


class InapplicableDeduction(DeducReducError, ValueError):
    pass


class NegativeLambda(DeducReducError, ValueError):
    pass


class PositiveCoefficientPresent(DeducReducError, ValueError):
    pass


class NotASolution(DeducReducError, ValueError):
    pass
