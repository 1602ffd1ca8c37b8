"""Exception hierarchy shared by every module.

Precondition failures derive from :class:`PreconditionError` so the CLI can map
them to a single exit code.
"""


class KGError(Exception):
    """Base class for all package errors."""


class PreconditionError(KGError, ValueError):
    """Input violates a documented precondition."""


class DomainError(PreconditionError):
    pass


class CompatibilityError(PreconditionError):
    """Goursat corner data mismatch, f(0) != g(0)."""


class ContinuityError(PreconditionError):
    """Traces of two fields disagree along the gluing line."""


class AlignmentError(PreconditionError):
    pass


class SupportError(PreconditionError):
    """Boundary data does not vanish where the caller claimed it does."""


class AbscissaError(PreconditionError):
    pass


class MetadataError(PreconditionError):
    pass


class SpecError(PreconditionError):
    pass


class ConvergenceError(KGError, RuntimeError):
    """An iterative procedure hit its budget before its stop rule fired.

    ``report`` carries whatever partial diagnostics the caller can use.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UsageError(KGError):
    pass
