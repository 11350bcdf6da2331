"""Typed errors shared across the package.

The CLI maps these onto exit codes: InputError -> 2, AccuracyError -> 3,
GeometryError -> 4. Messages name the violated check so failures are
actionable from scripts.
"""


class K3ZetaError(Exception):
    """Base class for all typed errors raised by this package."""


class InputError(K3ZetaError):
    """Malformed or inconsistent input (wrong shape, bad JSON, bad flags)."""


class DegenerateLatticeError(InputError):
    """A Gram matrix that was required to be nondegenerate is singular."""


class GeometryError(K3ZetaError):
    """A geometric precondition failed (compatibility, signature, isotropy)."""


class MarkingError(GeometryError):
    """A marking isometry does not relate the data it was asked to relate."""


class ConsistencyError(GeometryError):
    """Two declarations that must agree do not (for example curve data
    supplied for a spectrum whose twisted tail claims a free involution)."""


class AccuracyError(K3ZetaError):
    """The requested tolerance is not reachable with the supplied data.

    Carries the achievable bound so callers can decide whether to retry
    with a larger cutoff or accept the weaker result.
    """

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable
