"""Exception types shared across the package."""


class HullError(Exception):
    """Base class for all errors raised by chainhull."""


class ValidationError(HullError, ValueError):
    """Bad ring parameters, bad multiset, or a violated precondition."""


class UnsupportedFamilyError(ValidationError):
    """The chain ring is valid but has no concrete element arithmetic here."""


class BudgetExceededError(HullError):
    """An exhaustive scan would exceed the configured budget."""


class VerificationError(HullError):
    """An oracle disagreed with the analytic path.

    ``witness`` carries a JSON-serializable description of the mismatch.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}
