"""Cutoff-regularised Coulomb interaction of point charges.

With the wave-number integral stopped at k* = 1/L*, the pair kernel is
(2/pi) Si(r)/r.  It tends to 1/r for r >> 1 and to the finite value 2/pi
at r = 0, so self terms and coincident charges are harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .specfun import sine_integral
from .units import PlanckScale, make_scale

TAYLOR_THRESHOLD = 1e-4
KERNEL_AT_ZERO = 2.0 / math.pi


@dataclass(frozen=True)
class ChargeConfig:
    """Point charges in units of e at positions in units of L*."""

    charges: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        charges = np.atleast_1d(np.asarray(self.charges, dtype=float))
        positions = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        if charges.ndim != 1 or charges.shape[0] != positions.shape[0]:
            raise DomainError("need one 3-D position per charge")
        if not (np.all(np.isfinite(charges)) and np.all(np.isfinite(positions))):
            raise DomainError("charges and positions must be finite")
        object.__setattr__(self, "charges", charges)
        object.__setattr__(self, "positions", positions)

    @classmethod
    def from_pairs(cls, pairs):
        """Build from an iterable of ``(e, (x, y, z))``."""
        pairs = list(pairs)
        if not pairs:
            return cls(np.zeros(0), np.zeros((0, 3)))
        return cls([e for e, _ in pairs], [r for _, r in pairs])

    def __len__(self):
        return self.charges.shape[0]

    def distances(self):
        """Matrix of pair separations r_ij."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def kernel(r):
    """Regularised pair kernel (2/pi) Si(r)/r in units of 1/L*.

    Below ``TAYLOR_THRESHOLD`` the series (2/pi)(1 - r^2/18 + r^4/600)
    replaces the quotient.
    """
    arr = np.asarray(r, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("kernel needs finite r >= 0")
    out = np.empty(arr.shape)
    near = arr < TAYLOR_THRESHOLD
    r2 = arr[near] ** 2
    out[near] = KERNEL_AT_ZERO * (1.0 - r2 / 18.0 + r2 * r2 / 600.0)
    far = ~near
    out[far] = KERNEL_AT_ZERO * sine_integral(arr[far]) / arr[far]
    return out if out.ndim else float(out)


def config_energy(config, include_self=True):
    """Interaction energy 1/2 sum_ij e_i e_j kernel(r_ij), in e^2/L*.

    With ``include_self=False`` the diagonal i = j is dropped.  Distinct
    charges at the same point use the r = 0 limit of the kernel.
    """
    n = len(config)
    if n == 0:
        return 0.0
    k = kernel(config.distances())
    if not include_self:
        np.fill_diagonal(k, 0.0)
    e = config.charges
    # numpy reduces with pairwise summation in a fixed order
    return float(0.5 * np.sum(np.outer(e, e) * k))


def to_planck_energy(energy, scale=None):
    """Convert an energy in e^2/L* to E* (e^2 = alpha hbar c)."""
    if scale is None:
        scale = make_scale()
    return energy * scale.alpha


def self_energy(e=1.0, scale: PlanckScale | None = None):
    """Self-energy (e^2/pi)/L* of a charge ``e`` (in units of e), in E*.

    For the electron this is (alpha/pi) E*.
    """
    if not math.isfinite(e):
        raise DomainError("charge must be finite")
    if scale is None:
        scale = make_scale()
    return e * e * scale.alpha / math.pi
