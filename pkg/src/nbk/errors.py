"""Exception types raised by nbk."""


class NBKError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(NBKError, ValueError):
    pass


class InvalidK(InvalidParams):
    pass


class InvalidR(InvalidParams):
    pass


class InvalidP(InvalidParams):
    pass


class RangeTooSmall(NBKError, ValueError):
    pass


class CapExceeded(NBKError):
    """A configured size or iteration cap would be exceeded."""


class TableTooLarge(CapExceeded):
    pass


class InfeasibleEnumeration(CapExceeded):
    pass


class SimulationCapExceeded(CapExceeded):
    pass


class NotApplicable(NBKError):
    """The requested closed form has no statement for these parameters."""


class IdentityViolation(NBKError, AssertionError):
    """An identity that must hold exactly failed; always an implementation bug."""
