"""Exception hierarchy.

Every error raised by the library derives from :class:`SpectralLapError`, so
callers (and the CLI) can catch one type and still read the specific case from
the class name.
"""


class SpectralLapError(Exception):
    """Base class for all library errors."""


# --- input validation -------------------------------------------------------

class NonSymmetric(SpectralLapError, ValueError):
    pass


class NonFinite(SpectralLapError, ValueError):
    pass


class InvalidSpec(SpectralLapError, ValueError):
    pass


class InvalidSigma(SpectralLapError, ValueError):
    pass


class DimensionMismatch(SpectralLapError, ValueError):
    pass


class EmptySide(SpectralLapError, ValueError):
    pass


class TooManyClusters(SpectralLapError, ValueError):
    pass


class TooManyDimensions(SpectralLapError, ValueError):
    pass


class MissingParameter(SpectralLapError, ValueError):
    pass


class LabelMismatch(SpectralLapError, ValueError):
    pass


class RowSumViolation(SpectralLapError, ValueError):
    pass


class BadDistanceMatrix(SpectralLapError, ValueError):
    pass


class IndexOutOfRange(SpectralLapError, IndexError):
    pass


class UnknownDataset(SpectralLapError, ValueError):
    pass


class NonOrthonormal(SpectralLapError, ValueError):
    pass


# --- graph structure --------------------------------------------------------

class IsolatedVertex(SpectralLapError, ValueError):
    """A vertex has zero degree."""


class DisconnectedGraph(SpectralLapError, ValueError):
    """The graph has more than one connected component."""


# --- numerical failures -----------------------------------------------------

class NotPositiveDefinite(SpectralLapError, ArithmeticError):
    pass


class NotPSD(SpectralLapError, ArithmeticError):
    pass


class NotEnoughTrivialPairs(SpectralLapError, ArithmeticError):
    pass


class DegenerateVector(SpectralLapError, ArithmeticError):
    pass


class ZeroExpectation(SpectralLapError, ArithmeticError):
    pass


class NearZeroEigenvalue(SpectralLapError, ArithmeticError):
    pass
