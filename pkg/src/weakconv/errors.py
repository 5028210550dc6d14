"""Exception hierarchy shared by all weakconv modules."""


class WeakconvError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(WeakconvError):
    """Points or set leaves of different dimensions were combined."""


class EmptySetError(WeakconvError):
    """An operation that needs a nonempty set received an empty one."""


class InexactFragment(WeakconvError):
    """The set expression is outside the fragment with exact boundaries.

    One-dimensional interval algebra and single balls (or their complements)
    in higher dimensions are exact; nested higher-dimensional expressions
    only admit conservative boundary supersets.
    """


class UnboundedRegion(WeakconvError):
    """A mass query touched a region whose closure reaches the marked point
    while the measure has an infinite atom tail there."""


class UnboundedIntegral(WeakconvError):
    """Integration was requested without a vanish-radius certificate against
    a measure with an infinite atom tail."""


class MissingTailLocator(WeakconvError):
    """An infinite atom family has no tail locator, so mass outside a radius
    cannot be computed in finitely many steps."""


class MissingTailBound(WeakconvError):
    """A jump-intensity validity check on an infinite family needs a declared
    bound on the clamped-square tail and none was supplied."""


class NotInterior(WeakconvError):
    """The marked point is not interior to the given set."""


class ShrinkSearchExceeded(WeakconvError):
    """The closed-shrink search hit its iteration cap.

    Attributes carry the best gap achieved and the index where it occurred.
    """

    def __init__(self, message, best_n=None, achieved_gap=None):
        super().__init__(message)
        self.best_n = best_n
        self.achieved_gap = achieved_gap


class ContinuityRadiusNotFound(WeakconvError):
    """No radius with zero boundary mass was found within resolution limits."""

    def __init__(self, message, nearest_miss=None, miss_mass=None):
        super().__init__(message)
        self.nearest_miss = nearest_miss
        self.miss_mass = miss_mass


class GridConstructionError(WeakconvError):
    """A level grid avoiding the positive-mass values could not be built."""


class ScenarioError(WeakconvError):
    """A scenario file failed to parse or violated a declared invariant."""
