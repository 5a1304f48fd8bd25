"""Exception types and result flags shared across the package."""


class CornermagError(Exception):
    """Base class for package-specific errors."""


class NoConvergence(CornermagError):
    """A refinement ladder or iteration exhausted its budget before reaching tol."""


class InvalidDomain(CornermagError):
    """Domain incidence data is not closed or violates a structural invariant."""


class UnsupportedGeometry(CornermagError):
    """The requested operation is outside the supported geometry classes."""


class ZeroField(CornermagError):
    """An operation that requires B != 0 received a vanishing field."""


class NotCaseOne(CornermagError):
    """A generalized-eigenvector descriptor was requested outside case (i)."""


class ResourceLimit(CornermagError):
    """A 3D solve would exceed the configured grid budget."""


class MeshFailure(CornermagError):
    """The built-in mesher produced no usable cells for the polygon."""


class IoError(CornermagError):
    """Cache or report file could not be read or written."""


class ParseError(CornermagError):
    """Positioned syntax error in a domain/field/gauge/cache file."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ValidationError(CornermagError):
    """A parsed record violates a named structural invariant."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
        self.message = message


class CurlMismatch(CornermagError):
    """A supplied gauge's curl disagrees with the declared field."""


# Result flags (attached to samples/reports, never raised).
GAP_TOO_SMALL = "gap-too-small"
ESSENTIAL_COLLISION = "essential-collision"
FIELD_VANISHES = "field-vanishes"
FULL_SPACE_LIKE = "full-space-like"
TRUNCATION_NOISE = "truncation-noise"
