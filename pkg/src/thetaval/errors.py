"""Exception hierarchy shared by all thetaval modules."""


class ThetavalError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ThetavalError):
    """Input outside the mathematical domain of an operation."""


class DivisorStraddlesZero(DomainError):
    """Division by a ball whose enclosure contains zero."""


class NegativeBaseEvenRoot(DomainError):
    """Fractional power of a ball that is not strictly positive."""


class UnsupportedArgument(DomainError):
    """Argument outside the supported range of gamma_rational."""


class NotConvergent(ThetavalError):
    """A q-series or q-product was asked to converge with |q| >= 1."""


class FactorNearZero(ThetavalError):
    """A q-Pochhammer factor could not be bounded away from zero."""


class PreconditionViolated(ThetavalError):
    """A stated arithmetic precondition (e.g. ab = cd) does not hold."""


class EvaluationError(ThetavalError):
    """Failure while evaluating a catalog entry; carries the entry id."""

    def __init__(self, entry_id: str, message: str):
        super().__init__(f"{entry_id}: {message}")
        self.entry_id = entry_id


class DivisionByZeroEnclosure(DivisorStraddlesZero):
    """Expression-tree division by an enclosure containing zero."""


class NegativeEvenRootEnclosure(NegativeBaseEvenRoot):
    """Expression-tree even root of a non-positive enclosure."""


class UnsupportedGammaArgument(UnsupportedArgument):
    """Expression-tree gamma node with argument outside (0, 2]."""


class NoRootMatches(ThetavalError):
    """Neither quadratic root overlaps the series oracle."""


class BothRootsMatch(ThetavalError):
    """Both quadratic roots overlap the oracle; enclosures too wide."""


class RootsNotSeparable(ThetavalError):
    """Certified root enclosures of the cubic could not be separated."""


class ComplexRootsDetected(ThetavalError):
    """The cubic does not have three real roots."""


class NoPermutationMatches(ThetavalError):
    """No ordering of the cubic roots reproduces (u, v, w)."""


class MultiplePermutationsMatch(ThetavalError):
    """Several root orderings reproduce (u, v, w); enclosures too wide."""


class ParseError(ThetavalError):
    """Expression-grammar parse failure, with source position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
