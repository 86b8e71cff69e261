"""Exception types raised by conecut."""


class ConecutError(ValueError):
    """Base class for every domain error in the package."""


class ProfileError(ConecutError):
    pass


class DomainError(ConecutError):
    """An axial coordinate or window falls outside [0, H]."""


class NonMonotoneError(ConecutError):
    pass


class CoarseGrainError(ConecutError):
    """The stack cannot be blocked pairwise (odd count, uneven thickness, ...)."""


class DirectionMismatchError(ConecutError):
    pass


class PastingError(ConecutError):
    """Two covectors do not meet: the end plane of one is not the start of the other."""

    def __init__(self, gap: float, tol: float):
        self.gap = gap
        self.tol = tol
        super().__init__(f"pasting condition violated: gap {gap:.17g} exceeds tolerance {tol:.3g}")
