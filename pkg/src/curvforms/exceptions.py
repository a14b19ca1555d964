"""Exception types shared across the package.

All errors derive from :class:`GeometryError` (a ``ValueError``), so callers
that do not care about the distinction can catch a single class.
"""


class GeometryError(ValueError):
    """Base class for all geometric/algebraic input errors."""


class DimensionError(GeometryError):
    """An operation received data of an unsupported dimension."""


class DegenerateMetricError(GeometryError):
    """A metric (or induced Gram matrix) is singular or has the wrong signature."""


class NonUnitVectorError(GeometryError):
    """A vector required to be unit length is not, beyond tolerance."""


class LightlikePlaneError(GeometryError):
    """A 2-plane is degenerate (lightlike) for the Lorentzian inner product."""


class NotCommutingError(GeometryError):
    """An operator fails a required commutation property beyond tolerance.

    Carries the offending relative residual in :attr:`residual`.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TensorValidationError(GeometryError):
    """A curvature component table violates a required identity.

    Attributes
    ----------
    identity : str
        Name of the worst-violated identity.
    indices : tuple
        1-based index tuple where the worst violation occurs.
    residual : float
        Absolute size of the worst violation.
    """

    def __init__(self, identity, indices, residual):
        self.identity = identity
        self.indices = indices
        self.residual = residual
        super().__init__(
            f"{identity} violated at indices {indices} with residual {residual:.6g}"
        )


class FrameReconstructionError(GeometryError):
    """Normal-form frame reconstruction failed; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SampleFormatError(ValueError):
    """A point-sample file or line is structurally malformed.

    Deliberately *not* a :class:`GeometryError`: format problems are usage
    errors, while geometry errors are analysis results.  Carries the 1-based
    ``line`` number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
