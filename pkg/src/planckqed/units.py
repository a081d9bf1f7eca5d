"""Planck-scale unit convention.

Every quantity inside the package is expressed in natural units with
hbar = c = k_B = 1 and the cutoff scale set to one: E* = L* = P* = 1.
Volumes are therefore in V* = L*^3 and temperatures in E*/k_B.  The only
dimensional numbers live here and are used for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .exceptions import DomainError

DEFAULT_ALPHA = 1.0 / 137.035999

# SI values of the Planck quantities (CODATA 2018), except the mass which
# keeps the rounded gram value quoted alongside the cutoff.
PLANCK_MASS_G = 2.18e-5
PLANCK_LENGTH_M = 1.616255e-35
PLANCK_ENERGY_J = 1.956082e9
PLANCK_MOMENTUM_KG_M_S = 6.524785

_DISPLAY = {
    "energy": (PLANCK_ENERGY_J, "J"),
    "length": (PLANCK_LENGTH_M, "m"),
    "momentum": (PLANCK_MOMENTUM_KG_M_S, "kg m/s"),
    "mass": (PLANCK_MASS_G, "g"),
}


class DisplayValue(NamedTuple):
    value: float
    unit: str


@dataclass(frozen=True)
class PlanckScale:
    """The cutoff scale together with the fine-structure constant.

    Attributes
    ----------
    alpha : float
        Fine-structure constant e^2/(hbar c), in (0, 1).
    energy_star, length_star, momentum_star : float
        Planck energy, length and momentum in internal units (all 1).
    si_mass_star : float
        Planck mass in grams, for display only.
    """

    alpha: float = DEFAULT_ALPHA
    energy_star: float = 1.0
    length_star: float = 1.0
    momentum_star: float = 1.0
    si_mass_star: float = PLANCK_MASS_G

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        for name in ("energy_star", "length_star", "momentum_star"):
            if getattr(self, name) != 1.0:
                raise DomainError(f"{name} is fixed to 1 in internal units")

    @property
    def charge_squared(self):
        """Elementary charge squared in E* L* units (e^2 = alpha hbar c)."""
        return self.alpha

    @property
    def ratio_prefactor(self):
        """1/(16 pi alpha), the zero-point to self-energy ratio per V*."""
        return 1.0 / (16.0 * math.pi * self.alpha)


def make_scale(alpha=None):
    """Build a :class:`PlanckScale`; ``alpha`` defaults to 1/137.035999."""
    if alpha is None:
        alpha = DEFAULT_ALPHA
    return PlanckScale(alpha=float(alpha))


def to_display(value, kind):
    """Convert an internal-unit quantity of the given kind to SI (grams for mass)."""
    try:
        factor, unit = _DISPLAY[kind]
    except KeyError:
        raise DomainError(
            f"unknown kind {kind!r}; expected one of {sorted(_DISPLAY)}"
        ) from None
    return DisplayValue(value * factor, unit)


def from_display(value, kind):
    """Inverse of :func:`to_display`."""
    if isinstance(value, DisplayValue):
        value = value.value
    try:
        factor, _ = _DISPLAY[kind]
    except KeyError:
        raise DomainError(f"unknown kind {kind!r}") from None
    return value / factor
