"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Input data violates a structural invariant (symmetry, range, finiteness)."""


class DimensionError(ValueError):
    """Shapes or subspace widths are incompatible."""


class ConfigError(ValueError):
    """A configuration document or object is invalid."""
