"""Exception hierarchy shared by all modules."""


class FFMError(Exception):
    """Base class for all package errors."""


class ConfigurationError(FFMError):
    """Inconsistent setup: mixed field specs, incomplete prime tables, bad run configs."""


class DomainError(FFMError, ValueError):
    """Input outside an operation's mathematical domain."""


class PoleError(FFMError, ZeroDivisionError):
    """Evaluation of a zeta factor at its pole."""


class NumericalError(FFMError, ArithmeticError):
    """Root finding or quadrature failed to converge; carries diagnostics."""


class BudgetError(FFMError, RuntimeError):
    """Requested sweep exceeds the configured family budget; message carries a cost estimate."""


class VerificationError(FFMError, AssertionError):
    """A hard exact check (RH deviation, pointwise inequality) failed."""
