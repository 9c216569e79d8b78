"""Exception types shared across the package."""

from __future__ import annotations


class ModalCorrError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ModalCorrError):
    """Concrete-syntax error, with position and expected-token info."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += " (expected: " + ", ".join(expected) + ")"
        super().__init__(detail)


class NotInClass(ModalCorrError):
    """A formula does not satisfy the syntactic precondition of a strategy."""


class NotRegularAntecedent(ModalCorrError):
    """An antecedent does not decompose into box-formulas and negative parts."""


class NotUniform(ModalCorrError):
    """The formula has a letter occurring with both polarities."""


class CyclicDigraph(ModalCorrError):
    """The dependency digraph has a cycle, so no inductive order exists."""


class SharedLetters(ModalCorrError):
    """Disjuncts passed to the disjunction rule share proposition letters."""


class Unsupported(ModalCorrError):
    """No reduction strategy applies.

    Carries the classification report.  This is a refusal, not a claim
    that the input has no first-order correspondent (deciding that is
    algorithmically impossible).
    """

    def __init__(self, report):
        self.report = report
        super().__init__(f"no reduction strategy for class {report.syntactic_class.name}")


class ResourceCap(ModalCorrError):
    """An exhaustive sweep would exceed the configured resource bound."""


class ConjunctCapExceeded(ResourceCap):
    """Distributing an antecedent would produce too many definite conjuncts."""


class UnboundVariable(ModalCorrError):
    """A first-order formula was evaluated under a partial assignment."""


class NotMeetPreserving(ModalCorrError):
    """The map is not completely meet-preserving, so it has no left adjoint."""


class NotResiduated(ModalCorrError):
    """The map has no residual in some coordinate."""
