"""Exception hierarchy shared by all mcsum modules."""


class McsumError(Exception):
    """Base class for every error raised by this package."""


class ZeroDenominator(McsumError, ZeroDivisionError):
    pass


class InvalidEquation(McsumError, ValueError):
    pass


class NoImprovement(McsumError):
    """No initial correction raises the rate above that of the right-hand side."""


class NonAffine(McsumError):
    """A probed series coefficient is not affine in the unknown being solved."""

    def __init__(self, unknown: str, order: int, second_difference):
        self.unknown = unknown
        self.order = order
        self.second_difference = second_difference
        super().__init__(
            f"coefficient of x^-{order} is not affine in {unknown} "
            f"(second difference {second_difference})"
        )


class NoDependence(McsumError):
    """The unknown does not influence any coefficient inside the probe window."""

    def __init__(self, unknown: str, first_order: int, window: int):
        self.unknown = unknown
        super().__init__(
            f"{unknown} does not affect coefficients x^-{first_order}.."
            f"x^-{first_order + window - 1}"
        )


class Stopped(McsumError):
    """The correction process cannot continue (a kappa solved to zero)."""

    def __init__(self, reason: str = "kappa_zero", level: int | None = None):
        self.reason = reason
        self.level = level
        super().__init__(f"correction stopped at level {level}: {reason}")


class InvalidScaling(McsumError, ValueError):
    pass


class InvalidParams(McsumError, ValueError):
    pass


class PoleInRange(McsumError, ValueError):
    pass


class NotTerminating(McsumError, ValueError):
    pass


class NonFinite(McsumError, ArithmeticError):
    pass


class DomainError(McsumError, ValueError):
    pass


class NonVanishingAtInfinity(McsumError, ValueError):
    pass


class DivergentTail(McsumError, ValueError):
    pass


class NotConverged(McsumError, ArithmeticError):
    """A numeric evaluation reached its depth limit before meeting the tolerance."""
