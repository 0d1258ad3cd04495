"""Exception hierarchy shared by all modules."""


class BergerError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BergerError, ValueError):
    pass


class SignatureError(ValidationError):
    """Quadratic form does not have signature (1, 2)."""


class FinslerViolation(ValidationError):
    """Killing form changes sign on the null cone of the form."""


class DegeneratePlane(ValidationError):
    pass


class NotTimeLike(ValidationError):
    pass


class NotAdmissible(ValidationError):
    """Covector is not future directed or lies outside the causal cone."""


class DomainError(BergerError):
    pass


class RegimeError(DomainError):
    """Operation is undefined for the regime of the metric parameters."""


class OutsideDomain(DomainError):
    """Target lies outside the diffeomorphism domain of the exponential map."""


class ConvergenceFailure(BergerError):
    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class PlannerFailure(ConvergenceFailure):
    pass
