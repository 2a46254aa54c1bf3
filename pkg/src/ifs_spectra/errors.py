"""Exception types shared across the package."""


class IfsSpectraError(Exception):
    """Base class for all package errors."""


class SingularMatrixError(IfsSpectraError):
    pass


class UndecidedExpansivenessError(IfsSpectraError):
    """No exact norm certificate within k_max and eigenvalues inconclusive."""


class UnsupportedDimensionError(IfsSpectraError):
    pass


class DegenerateDigitSpanError(IfsSpectraError):
    """Digit set does not span the space; the candidate set would be unbounded."""


class SizeMismatchError(IfsSpectraError):
    pass


class NotUnimodularError(IfsSpectraError):
    pass


class NonIntegerDigitsError(IfsSpectraError):
    pass


class NotInvariantError(IfsSpectraError):
    pass


class FiberCountMismatchError(IfsSpectraError):
    pass


class SubTripleNotHadamardError(IfsSpectraError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BadWeightsError(IfsSpectraError):
    pass


class EmptyGridError(IfsSpectraError):
    pass


class TooManyPointsError(IfsSpectraError):
    pass


class DistinctnessViolationError(IfsSpectraError):
    """The same frequency was produced twice while enumerating a spectrum."""


class ReducibilityConditionUnmetError(IfsSpectraError):
    """The invariant catalog is not pairwise disjoint."""


class BoxConstructionError(IfsSpectraError):
    """No invariant bounding box could be certified for the candidate search."""


class CatalogIncompleteWarning(UserWarning):
    pass
