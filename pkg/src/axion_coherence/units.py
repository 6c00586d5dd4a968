"""Natural units (hbar = c = 1) with a single integer mass dimension.

Every physical value in the package is a power of eV.  Energy and mass carry
dimension +1, time and length -1, energy density +4.  Laboratory units are
converted exactly once at the boundary through the functions below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

from .errors import DimensionError, DomainError

# CODATA 2018
HBAR_EV_S = 6.582119569e-16
HBAR_C_EV_CM = 1.973269804e-5

EV_PER_GEV = 1e9


@dataclass(frozen=True)
class Constants:
    hbar_eV_s: float = HBAR_EV_S
    hbar_c_eV_cm: float = HBAR_C_EV_CM


CONSTANTS = Constants()


@dataclass(frozen=True)
class Quantity:
    """A real value carrying its mass dimension in natural units."""

    value: float
    dim: int = 0

    def __post_init__(self):
        if isinstance(self.dim, bool) or not isinstance(self.dim, int):
            raise TypeError(f"dimension must be an int, got {self.dim!r}")

    def _coerce(self, other):
        if isinstance(other, Quantity):
            return other
        if isinstance(other, Real):
            return Quantity(float(other), 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.dim != self.dim:
            raise DimensionError(f"cannot add eV^{self.dim} and eV^{other.dim}")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.dim != self.dim:
            raise DimensionError(f"cannot subtract eV^{other.dim} from eV^{self.dim}")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim + other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value / other.value, self.dim - other.dim)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if isinstance(n, bool) or not isinstance(n, int):
            raise TypeError("quantities may only be raised to integer powers")
        return Quantity(self.value**n, self.dim * n)

    def __float__(self):
        return float(self.value)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim)

    def __str__(self):
        if self.dim == 0:
            return f"{self.value:.6g}"
        return f"{self.value:.6g} eV^{self.dim}"


def value_of(x, dim: int) -> float:
    """Return the natural-unit value of ``x``, checking its dimension.

    Plain numbers are taken to already be in eV^dim.
    """
    if isinstance(x, Quantity):
        if x.dim != dim:
            raise DimensionError(f"expected eV^{dim}, got eV^{x.dim}")
        return x.value
    return float(x)


def seconds_to_inverse_eV(t: float) -> Quantity:
    if not t > 0:
        raise DomainError(f"time must be positive, got {t!r} s")
    return Quantity(t / HBAR_EV_S, -1)


def inverse_eV_to_seconds(t) -> float:
    t = value_of(t, -1)
    if not t > 0:
        raise DomainError(f"time must be positive, got {t!r} eV^-1")
    return t * HBAR_EV_S


def density_GeV_cm3_to_eV4(rho: float) -> Quantity:
    """GeV/cm^3 -> eV^4, using (hbar c)^3 to turn cm^-3 into eV^3."""
    if not rho >= 0:
        raise DomainError(f"energy density must be non-negative, got {rho!r} GeV/cm^3")
    return Quantity(rho * EV_PER_GEV * HBAR_C_EV_CM**3, 4)


def density_eV4_to_GeV_cm3(rho) -> float:
    rho = value_of(rho, 4)
    if not rho >= 0:
        raise DomainError(f"energy density must be non-negative, got {rho!r} eV^4")
    return rho / (EV_PER_GEV * HBAR_C_EV_CM**3)


def length_inverse_eV_to_cm(length) -> float:
    length = value_of(length, -1)
    if not length >= 0:
        raise DomainError(f"length must be non-negative, got {length!r} eV^-1")
    return length * HBAR_C_EV_CM


def cm_to_inverse_eV(length_cm: float) -> Quantity:
    if not length_cm >= 0:
        raise DomainError(f"length must be non-negative, got {length_cm!r} cm")
    return Quantity(length_cm / HBAR_C_EV_CM, -1)


def gamma_from_speed(speed: float) -> float:
    if not 0 <= speed < 1:
        raise DomainError(f"speed must lie in [0, 1), got {speed!r}")
    return 1.0 / math.sqrt((1.0 - speed) * (1.0 + speed))


def speed_from_gamma(gamma: float) -> float:
    if not gamma >= 1:
        raise DomainError(f"Lorentz factor must be >= 1, got {gamma!r}")
    # sqrt(1 - 1/g^2) written to keep precision near g = 1
    return math.sqrt((gamma - 1.0) * (gamma + 1.0)) / gamma
