"""Exception types shared across the package."""


class GeomRankError(Exception):
    """Base class for every error raised by geomrank."""


class NotPrime(GeomRankError, ValueError):
    pass


class DimensionMismatch(GeomRankError, ValueError):
    pass


class SingularMatrix(GeomRankError, ValueError):
    pass


class IndexOutOfRange(GeomRankError, ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class DuplicateEntry(GeomRankError, ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class ParseError(GeomRankError, ValueError):
    def __init__(self, msg, line=None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class UnknownName(GeomRankError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BadParams(GeomRankError, ValueError):
    pass


class NotApplicable(GeomRankError, ValueError):
    pass


class BudgetExceeded(GeomRankError):
    """Enumeration would exceed the configured point budget.

    ``probable`` optionally carries a randomized verdict that was computed
    instead of the exact one.
    """

    def __init__(self, msg, needed=None, budget=None, probable=None):
        super().__init__(msg)
        self.needed = needed
        self.budget = budget
        self.probable = probable


class InsufficientPrimes(GeomRankError, ValueError):
    pass


class Inconsistent(GeomRankError):
    pass


class Unresolved(GeomRankError):
    pass


class PreconditionFailed(GeomRankError, ValueError):
    pass
