"""Exception types raised by clarkeframe."""


class ClarkeFrameError(ValueError):
    """Base class for all validation errors in this package."""


class GeometryError(ClarkeFrameError):
    """Joint arrangement violates a symmetry condition or a parameter bound."""


class DimensionError(ClarkeFrameError):
    """Array length does not match the joint count of the geometry."""


class ConstraintError(ClarkeFrameError):
    """Joint vector violates the displacement constraint (sum of displacements != 0)."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RegularityError(ClarkeFrameError):
    """Offset curve is not regular (offset distance reaches the local radius)."""


class ConfigError(ClarkeFrameError):
    """Configuration document failed validation; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
