"""Exception types shared across the package (the CLI maps them to exit codes)."""


class Growth1324Error(Exception):
    """Base class."""


class InputParseError(Growth1324Error, ValueError):
    """Malformed code, path, pattern or table line."""


class CoverageError(Growth1324Error):
    """A Q-table does not cover the requested pairs."""


class ResourceError(Growth1324Error):
    """Requested size exceeds a configured enumeration cap."""


class DomainError(Growth1324Error, ValueError):
    """Arguments outside the domain of a formula."""
