"""Exception hierarchy shared by every module."""


class BroadgenError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(BroadgenError):
    """A resource ceiling (nodes, elements, fuel, size) was hit."""


class HfParseError(BroadgenError, ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class ArityError(BroadgenError, ValueError):
    pass


class NotANumeral(BroadgenError, ValueError):
    pass


class NotATerm(BroadgenError, ValueError):
    pass


class BranchError(BroadgenError, ValueError):
    pass


class NonFinitaryError(BroadgenError):
    """A family has no bounded enumerator, so it cannot be exhausted."""


class DerivationError(BroadgenError, ValueError):
    pass


class UnknownRule(DerivationError):
    pass


class DomainMismatch(DerivationError):
    pass


class IndexRejected(DerivationError):
    pass


class MalformedDerivation(DerivationError):
    pass


class NotBroadNumber(BroadgenError, ValueError):
    pass


class NotGenerated(BroadgenError, ValueError):
    pass


class WellOrderError(BroadgenError, ValueError):
    def __init__(self, axiom: str, detail: str = ""):
        super().__init__(f"{axiom} fails" + (f": {detail}" if detail else ""))
        self.axiom = axiom


class OrdinalError(BroadgenError, ValueError):
    pass


class OracleNotApplicable(BroadgenError):
    pass


class DslError(BroadgenError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f" (line {line}, col {col})" if line else ""
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.col = col


class DslSyntaxError(DslError):
    pass


class UnresolvedName(DslError):
    pass


class ArityMismatch(DslError):
    pass
