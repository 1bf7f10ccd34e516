"""Exception hierarchy shared by all modules."""


class SasakiLabError(Exception):
    """Base class for every error raised by the package."""


class DuplicateElement(SasakiLabError):
    pass


class UnknownName(SasakiLabError):
    pass


class InvalidElementName(SasakiLabError):
    pass


class CycleDetected(SasakiLabError):
    def __init__(self, a, b):
        super().__init__(f"covers contain a cycle through {a} and {b}")
        self.pair = (a, b)


class NotAPartialOrder(SasakiLabError):
    pass


class TermSyntaxError(SasakiLabError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariable(SasakiLabError):
    pass


class MissingOperation(SasakiLabError):
    pass


class TooManyVariables(SasakiLabError):
    pass


class NotALattice(SasakiLabError):
    def __init__(self, pair, what="lub"):
        super().__init__(f"pair ({pair[0]}, {pair[1]}) has no {what}")
        self.pair = pair
        self.what = what


class InducedOrderMismatch(SasakiLabError):
    pass


class NotOrthomodular(SasakiLabError):
    pass


class NotAPseudoring(SasakiLabError):
    pass


class KindMismatch(SasakiLabError):
    pass


class SchemeKindMismatch(SasakiLabError):
    pass


class SizeOutOfRange(SasakiLabError):
    pass


class UnboundedAlgebra(SasakiLabError):
    pass


class NoBounds(SasakiLabError):
    pass


class UnknownConjecture(SasakiLabError):
    pass


class BoundTooLarge(SasakiLabError):
    pass


class UnknownFixture(SasakiLabError):
    pass


class AlgebraSyntaxError(SasakiLabError):
    def __init__(self, message, line, col=1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ValidationError(SasakiLabError):
    def __init__(self, axiom, witness=None):
        detail = f" (witness {witness})" if witness else ""
        super().__init__(f"violates {axiom}{detail}")
        self.axiom = axiom
        self.witness = witness
