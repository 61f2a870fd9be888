"""Exception types raised across the package."""


class FocalRadiusError(ValueError):
    """Normal offset ``|t|`` reaches the smallest singular pair ``x_r``."""


class DegenerateLevelError(ValueError):
    """Secondary level with a vanishing component."""


class StepTooLargeError(ValueError):
    """The upper-left block ``M + tA`` of an approach curve became singular."""


class OffVarietyError(ValueError):
    """A base point expected to lie on C(n, 2r) does not."""


class DegenerateFitError(ValueError):
    """Fewer than three usable points in a log-log fit."""


class UnsupportedRegimeError(Exception):
    """The requested check does not apply for n - 2r < 3.

    This is a signal rather than a failure: the slicing argument is known
    not to extend to that regime.
    """
