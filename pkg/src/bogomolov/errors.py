"""Exception hierarchy shared by every module of the package."""


class BogomolovError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGroup(BogomolovError):
    pass


class InvalidPermutation(BogomolovError):
    pass


class TooLarge(BogomolovError):
    """Raised when a computation would exceed a configured size cap."""

    def __init__(self, size, cap, advice=None):
        self.size = size
        self.cap = cap
        self.advice = advice
        msg = f"group of order {size} exceeds cap {cap}"
        if advice:
            msg += f"; {advice}"
        super().__init__(msg)


class NotMember(BogomolovError):
    pass


class NotCentral(BogomolovError):
    pass


class NotCocycle(BogomolovError):
    pass


class NotAutomorphism(BogomolovError):
    pass


class HypothesisViolated(BogomolovError):
    pass


class InconsistentPresentation(BogomolovError):
    pass


class Unsupported(BogomolovError):
    pass


class CriterionDisagreement(BogomolovError):
    """Two independent routes to the same answer disagreed."""
