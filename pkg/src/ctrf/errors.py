"""Exception types shared across the package."""


class CtrfError(Exception):
    """Base class for all errors raised by ctrf."""


class WordParseError(CtrfError, ValueError):
    pass


class ScanLimitExceeded(CtrfError):
    """Two streams agree on every letter up to the scan limit."""


class OracleLimitExceeded(CtrfError, ValueError):
    pass


class UnknownStream(CtrfError, KeyError):
    pass


class NegativeResult(CtrfError, ArithmeticError):
    pass


class EmptyWord(CtrfError, ValueError):
    pass


class MeetUndetermined(CtrfError):
    pass


class NotInCompletion(CtrfError, ValueError):
    """The infinite word has divergent d-length, so it is not a point of the completion."""


class EqualPoints(CtrfError, ValueError):
    pass


class MaxIterExceeded(CtrfError):
    def __init__(self, message, last_displacement=None, trace=None):
        super().__init__(message)
        self.last_displacement = last_displacement
        self.trace = trace


class NotContractiveWitness(CtrfError):
    """A pair of points that no map of the family contracts by gamma."""

    def __init__(self, x, y, ratios):
        super().__init__(f"no map contracts ({x!r}, {y!r}); ratios={ratios}")
        self.x = x
        self.y = y
        self.ratios = ratios


class CauchyBoundViolated(CtrfError):
    def __init__(self, p, q, lhs, rhs):
        super().__init__(f"(1-gamma)*d(x_{p}, x_{q}) = {lhs!r} > {rhs!r}")
        self.p, self.q, self.lhs, self.rhs = p, q, lhs, rhs


class OracleFailed(CtrfError):
    pass


class ModulusViolated(CtrfError):
    pass


class NoCommonFixedPoint(CtrfError):
    def __init__(self, table):
        super().__init__("no point is fixed by every map")
        self.table = table


class NotClosedUnderMaps(CtrfError, ValueError):
    pass
