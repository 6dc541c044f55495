"""Exception hierarchy.

Every domain error carries a stable ``name`` so the command line can report
it verbatim (exit status 1).
"""


class PolyrecError(Exception):
    """Base class for all domain errors raised by the library."""

    @property
    def name(self):
        return type(self).__name__


class ArityMismatch(PolyrecError, ValueError):
    pass


class ZeroPolynomial(PolyrecError, ValueError):
    pass


class NonIntegerCoefficient(PolyrecError, ValueError):
    pass


class NotPrime(PolyrecError, ValueError):
    pass


class PrimeTooSmall(PolyrecError, ValueError):
    pass


class NonLinearRule(PolyrecError, ValueError):
    def __init__(self, index, degree):
        super().__init__(f"rule {index} has degree {degree}; expected at most 1")
        self.index = index
        self.degree = degree


class NotHomogeneous(PolyrecError, ValueError):
    pass


class DegreeTooSmall(PolyrecError, ValueError):
    pass


class DenominatorVanished(PolyrecError, ZeroDivisionError):
    def __init__(self, step, rule):
        super().__init__(f"denominator of rule {rule} vanished at step {step}")
        self.step = step
        self.rule = rule


class OverflowBudget(PolyrecError, OverflowError):
    """An intermediate value would exceed the configured bit-size ceiling."""


class BudgetExceeded(PolyrecError, MemoryError):
    """A symbolic computation would exceed the configured monomial ceiling."""


class UnderdeterminedSearch(PolyrecError, ValueError):
    pass


class UnknownName(PolyrecError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(PolyrecError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UnknownVariable(ParseError):
    pass


class NegativeExponent(ParseError):
    pass
