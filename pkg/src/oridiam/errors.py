"""Exception types raised across the package."""


class OriDiamError(Exception):
    """Base class for every error raised by this package."""


class NotConnected(OriDiamError):
    pass


class HasBridge(OriDiamError):
    def __init__(self, bridges, message=None):
        self.bridges = sorted(bridges)
        text = ", ".join(f"{u}-{v}" for u, v in self.bridges)
        super().__init__(message or f"graph has bridge(s): {text}")


class TooLarge(OriDiamError):
    pass


class NotDominating(OriDiamError):
    pass


class NotStrong(OriDiamError):
    pass


class NotACycle(OriDiamError):
    pass


class NotAPath(OriDiamError):
    pass


class NotSubgraph(OriDiamError):
    pass


class InconsistentPathDirection(OriDiamError):
    pass


class HostHasBridge(HasBridge):
    pass


class StaleStep(OriDiamError):
    pass


class ConventionViolated(OriDiamError):
    pass


class LiftBoundError(OriDiamError):
    """A lifted orientation broke the inequality its rewrite promises."""


class UnknownName(OriDiamError):
    pass


class GraphFormatError(OriDiamError):
    pass


class ReductionStalled(OriDiamError):
    """The reduction route could not produce an orientation within 4|D|."""
