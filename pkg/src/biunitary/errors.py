"""Exception types raised across the library."""


class BiunitaryError(Exception):
    """Base class for all library-specific errors."""


class DimensionError(BiunitaryError, ValueError):
    """Shapes, sizes, or index ranges do not line up."""


class StructureError(BiunitaryError, ValueError):
    """A candidate failed structural or numerical verification."""


class DocumentError(BiunitaryError, ValueError):
    """An interchange document is malformed.

    The message carries a dotted/bracketed path to the offending field,
    for example ``data[2][0][1]: unknown token 'xyz'``.
    """

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CapabilityError(BiunitaryError, ValueError):
    """The requested computation exceeds a documented brute-force bound."""
