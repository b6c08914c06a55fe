"""Exception types raised across the package."""


class DiffScatError(ValueError):
    """Base class for all errors raised by diffscat."""


class IsolatedNodeError(DiffScatError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"node {node} has zero degree")


class AsymmetricInputError(DiffScatError):
    pass


class NegativeWeightError(DiffScatError):
    pass


class EigenFailure(DiffScatError):
    pass


class DisconnectedGraphError(DiffScatError):
    pass


class SizeMismatchError(DiffScatError):
    pass


class NotSymmetricError(DiffScatError):
    pass


class BetaOutOfRangeError(DiffScatError):
    pass


class ShapeMismatchError(DiffScatError):
    pass


class DimensionMismatchError(DiffScatError):
    pass


class TooLargeForExactError(DiffScatError):
    pass


class NonIntegerPowerError(DiffScatError):
    pass


class NormTooLargeError(DiffScatError):
    pass


class GenerationFailedError(DiffScatError):
    pass


class IndexOutOfRangeError(DiffScatError):
    pass


class DegenerateLabelsError(DiffScatError):
    pass


class ParseError(DiffScatError):
    pass


class SelfLoopError(DiffScatError):
    pass
