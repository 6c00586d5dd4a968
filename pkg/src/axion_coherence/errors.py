"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of a conversion or physical formula."""


class DimensionError(TypeError):
    """Arithmetic between quantities of incompatible mass dimension."""


class PointLimitError(ValueError):
    """The smearing profile was evaluated for a point (R = 0) detector."""


class PerturbativityError(ValueError):
    """lambda * |tr(Phi sigma)| is too large for the leading-order state."""


class PerturbativityWarning(UserWarning):
    pass


class RegimeError(ValueError):
    """An asymptotic formula was requested outside its regime of validity."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to reach the requested accuracy."""
