"""Exception hierarchy.  Everything derives from HznError."""


class HznError(Exception):
    pass


class DomainError(HznError, ValueError):
    """Arguments outside the region where the quantity is defined."""


class NonConvergent(HznError, ArithmeticError):
    """Error estimate stayed above the requested tolerance."""


class DegeneratePhase(DomainError):
    """A phase that must be non-integral is integral (within 1e-12)."""


class DegenerateArguments(DomainError):
    pass


class PoleEncountered(DomainError):
    pass


class NotReduced(DomainError):
    pass


class NotFundamentalDiscriminant(DomainError):
    pass


class DegenerateCycle(HznError):
    pass


class NonRationalInput(DomainError, TypeError):
    pass


class TwistNotInS(DomainError):
    pass


class NormMinusOneField(DomainError):
    pass
