"""Exception and warning types shared across the receiver models."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""

    def __init__(self, param, message):
        self.param = param
        super().__init__(f"{param}: {message}")


class FullyInconclusiveError(DomainError):
    """Every outcome is discarded, so the conditional error rate is undefined."""

    def __init__(self, message="fully inconclusive configuration"):
        super().__init__("p_inc", message)


class UndefinedRateError(ValueError):
    """An empirical rate was requested with no accepted trials."""


class BeyondUSDWarning(UserWarning):
    """Requested inconclusive rate exceeds the unambiguous-discrimination point."""


class MultimodalWarning(UserWarning):
    """Objective landscape shows separated local minima."""
