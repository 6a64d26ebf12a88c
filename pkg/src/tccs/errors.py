"""Exception hierarchy shared by every module of the package."""


class TCCSError(Exception):
    """Base class for all errors raised by tccs."""


class VertexNotInWeb(TCCSError):
    pass


class WebsNotDisjoint(TCCSError):
    pass


class RelationOutOfRange(TCCSError):
    pass


class WebTooLarge(TCCSError):
    """A connected component is too large for exact canonical labelling."""


class NotRecursiveGuardedSum(TCCSError):
    pass


class NotGuardedSum(TCCSError):
    pass


class NonTermination(TCCSError):
    """Raised when unfolding exceeds the depth bound (unguarded recursion)."""


class OpenProcess(TCCSError):
    """A free variable sits where a located process is required."""


class UnsupportedRestriction(TCCSError):
    """Restriction below the outermost wrapper stack."""


class InvalidRedex(TCCSError):
    pass


class StateSpaceExceeded(TCCSError):
    def __init__(self, limit, message=None):
        self.limit = limit
        super().__init__(message or f"state space exceeded the cap of {limit} states")


class MalformedRelation(TCCSError):
    pass


class NotAdapted(TCCSError):
    pass


class NotCCSFragment(TCCSError):
    pass


class UnknownState(TCCSError):
    pass


class SignatureError(TCCSError):
    pass


class ArityMismatch(SignatureError):
    pass


class UndeclaredSymbol(SignatureError):
    pass


class ParseError(TCCSError, SyntaxError):
    """Malformed source text; carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int, text: str = ""):
        self.line = line
        self.column = column
        SyntaxError.__init__(self, f"{line}:{column}: {message}", (None, line, column, text))
        self.msg = message

    def __str__(self):
        return f"{self.line}:{self.column}: {self.msg}"
