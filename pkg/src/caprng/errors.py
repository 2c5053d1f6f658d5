"""Exception hierarchy shared by all caprng modules."""


class CaprngError(Exception):
    """Base class for every error raised by caprng."""


class DimensionError(CaprngError, ValueError):
    """Operand shapes do not conform (or a dimension is zero)."""


class InvalidInputError(CaprngError, ValueError):
    pass


class InvalidSeedError(InvalidInputError):
    """Seed has the wrong length or is the all-zero fixed point."""


class UnsupportedSizeError(CaprngError):
    """Requested size exceeds what the shipped data or caps support."""


class ResourceError(CaprngError):
    """A configured work cap would be exceeded."""


class CatalogError(CaprngError, ValueError):
    """Malformed or inconsistent catalog file."""
