"""Exception types shared across the package.

The CLI maps these onto exit codes: validation and input problems exit 2,
resource and complexity limits exit 3.
"""


class FairFrontierError(Exception):
    """Base class for all package errors."""


class ValidationError(FairFrontierError):
    """A model, distribution, or configuration value is malformed."""


class InputError(FairFrontierError):
    """An operation received arguments outside its domain."""


class ContractError(FairFrontierError):
    """A precondition of an analysis routine does not hold."""


class ResourceError(FairFrontierError):
    """A requested computation exceeds a hard size limit."""


class ComplexityError(ResourceError):
    """A decision region needs more intervals than the caller allowed."""
