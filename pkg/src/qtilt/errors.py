"""Exception types shared across the package."""


class QtiltError(Exception):
    """Base class for all package errors."""


class QuiverParseError(QtiltError):
    """Malformed quiver description (file or inline text)."""


class SearchSpaceError(QtiltError):
    """A configured enumeration bound was exceeded."""


class NotRepFiniteError(QtiltError):
    """The quiver is not representation-finite within the configured bounds."""


class CatalogError(QtiltError):
    """Inconsistent catalog data (e.g. decomposition against an incomplete catalog)."""


class MathCheckError(QtiltError):
    """A verified mathematical postcondition failed; indicates a bug, never swallowed."""
