"""Exception types shared across the package.

The CLI maps these onto distinct exit codes: configuration problems exit
with 1, numerical-health violations with 2, verification failures with 3.
"""


class CatotocError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(CatotocError, ValueError):
    """Hilbert dimension is not an integer >= 2."""


class InvalidSpecError(CatotocError, ValueError):
    """Map or scenario specification violates its invariants."""


class UnsupportedMapError(InvalidSpecError):
    """Map is valid but outside what the propagator formula covers."""


class DimensionMismatchError(CatotocError, ValueError):
    """Operands have incompatible shapes or subsystem dimensions."""


class BudgetExceededError(CatotocError, ValueError):
    """Requested object exceeds the configured dense-matrix/grid budget."""


class NumericalHealthError(CatotocError, RuntimeError):
    """A quantity violated an exact identity beyond its tolerance."""


class ConfigError(CatotocError, ValueError):
    """Bad CLI flag, config file key, or config value."""
