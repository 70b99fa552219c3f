"""Exception types raised across the toolkit."""


class CoarseKitError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class InvalidMetric(CoarseKitError):
    pass


class SizeExceeded(CoarseKitError):
    def __init__(self, what, count, cap):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.count = count
        self.cap = cap


class UnknownPoint(CoarseKitError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class DimensionMismatch(CoarseKitError, ValueError):
    pass


class ConeOutOfScale(CoarseKitError):
    def __init__(self, simplex, reason):
        super().__init__(f"coned simplex {simplex} not in complex: {reason}")
        self.simplex = simplex


class NoSolution(CoarseKitError):
    """A linear system has no solution over the ring.

    ``rational`` tells whether a solution exists over the fraction field,
    which separates "not integral" from "inconsistent" over Z.
    """

    def __init__(self, rational):
        self.rational = rational
        super().__init__("rational but not integral" if rational else "no rational solution")


class NotASubcomplex(CoarseKitError):
    pass


class NotFillable(CoarseKitError):
    def __init__(self, rational):
        self.rational = rational
        msg = "cycle does not bound in the larger window"
        if rational:
            msg += " (a rational filling exists)"
        super().__init__(msg)


class CollarTooWide(CoarseKitError):
    pass


class ScheduleExceedsSample(CoarseKitError):
    pass


class NoPathInSupport(CoarseKitError):
    pass


class EdgeOutOfScale(CoarseKitError):
    pass


class NotAGraphMetric(CoarseKitError):
    pass


class DimensionOverflow(CoarseKitError):
    pass


class NoFundamentalCandidate(CoarseKitError):
    pass


class ConfigError(CoarseKitError):
    pass


class PreconditionError(CoarseKitError, ValueError):
    pass
