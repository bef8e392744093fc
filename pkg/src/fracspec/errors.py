"""Exception types shared across the package."""


class FracspecError(Exception):
    """Base class for all library-specific failures."""


class GraphError(FracspecError, ValueError):
    """Invalid graph input: bad size, bad weights, duplicate points, bad k."""


class NotUnitaryError(FracspecError, ValueError):
    """A matrix expected to be unitary failed the unitarity tolerance."""


class DecompositionError(FracspecError, RuntimeError):
    """A spectral factorization did not meet its reconstruction/orthonormality
    guarantees (e.g. eigenvector ordering instability in an operator build)."""


class MarginViolationError(FracspecError, RuntimeError):
    """The coupling operator has an eigenphase too close to the -1 branch cut,
    so the principal logarithm underlying the geodesic path is ill-defined.

    Attributes
    ----------
    margin : float
        Observed distance (radians) of the worst eigenphase from pi.
    index : int
        Index of the offending phase in the sorted decomposition.
    """

    def __init__(self, message, margin=None, index=None):
        super().__init__(message)
        self.margin = margin
        self.index = index


class ConfigError(FracspecError, ValueError):
    """Malformed configuration (CLI/JSON or programmatic)."""
