"""Exception types shared across the package."""


class CubeQMCError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(CubeQMCError):
    """Invalid input: bad polynomial, malformed file, inconsistent sizes."""


class WorkGuardError(CubeQMCError):
    """An exact enumeration would exceed the configured work limit."""


class NumericValidationError(CubeQMCError):
    """A numeric consistency check failed (non-monotone CDF, bad table)."""
