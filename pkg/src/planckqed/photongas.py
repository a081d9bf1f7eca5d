"""Photon gas with photon momenta capped at the Planck momentum.

In cutoff units (E* = P* = 1, epsilon(p) = p) the mean energy of a level
is p / (exp((p - mu)/T) - (1 - p)) and the free energy is

    F = g_s V T / (2 pi^2) * int_0^1 p^2/(1-p) ln(1 - (1-p) exp(-(p-mu)/T)) dp.

Internal energy and particle number are the corresponding mode sums over
the same density of states; the entropy follows from S = (U - F - mu N)/T.
As the cutoff moves to infinity the standard Planck/Bose laws reappear;
``classical_reference`` gives those for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .exceptions import DomainError
from .specfun import integrate_adaptive

NEAR_CUTOFF = 1e-4
QUAD_REL_TOL = 1e-12
QUAD_ABS_TOL = 1e-300


@dataclass(frozen=True)
class ThermoPoint:
    """Temperature (E*/k_B), chemical potential (E*), volume (V*), degeneracy."""

    T: float
    mu: float = 0.0
    V: float = 1.0
    g_s: int = 2

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"T must be positive, got {self.T!r}")
        if not (math.isfinite(self.mu) and self.mu <= 0):
            raise DomainError(f"mu must be <= 0, got {self.mu!r}")
        if not (math.isfinite(self.V) and self.V > 0):
            raise DomainError(f"V must be positive, got {self.V!r}")
        if self.g_s not in (1, 2):
            raise DomainError(f"g_s must be 1 or 2, got {self.g_s!r}")


@dataclass(frozen=True)
class StateFunctions:
    F: float
    U: float
    N: float
    S: float
    P: float


def _check_spectrum_args(p, T, mu):
    p = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
        raise DomainError("momentum must lie in [0, 1] (p <= P*)")
    if not T > 0:
        raise DomainError("T must be positive")
    if not mu <= 0:
        raise DomainError("mu must be <= 0")
    return p


def _denominator(p, T, mu):
    # exp(x) - (1 - p) == expm1(x) + p, free of cancellation at small x
    with np.errstate(over="ignore"):
        return np.expm1((p - mu) / T) + p


def occupancy(p, T, mu=0.0):
    """Mean occupation 1/(exp((p - mu)/T) - (1 - p)); infinite at p = mu = 0."""
    p = _check_spectrum_args(p, T, mu)
    with np.errstate(divide="ignore"):
        out = 1.0 / _denominator(p, T, mu)
    return out if out.ndim else float(out)


def mean_energy(p, T, mu=0.0):
    """Mean spectral energy of the level epsilon = p, in E*.

    At p = 0 the limit is T/(1 + T) when mu = 0 and 0 otherwise.
    """
    p = _check_spectrum_args(p, T, mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = p / _denominator(p, T, mu)
    zero = p == 0
    if np.any(zero):
        out = np.where(zero, T / (1.0 + T) if mu == 0 else 0.0, out)
    return out if np.ndim(out) else float(out)


def bose_mean_energy(p, T, mu=0.0):
    """Standard Bose-Einstein mean energy p/(exp((p - mu)/T) - 1), no cutoff term."""
    p = np.asarray(p, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        out = p / np.expm1((p - mu) / T)
    out = np.where(p == 0, T if mu == 0 else 0.0, out)
    return out if np.ndim(out) else float(out)


def free_energy_integrand(p, T, mu=0.0):
    """p^2/(1-p) * ln(1 - (1-p) A), A = exp(-(p - mu)/T).

    For 1 - p < 1e-4 the quotient is replaced by its expansion
    -p^2 (A + (1-p) A^2 / 2) so that p = 1 is regular.
    """
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    A = np.exp(-(p - mu) / T)
    out = np.empty(p.shape)
    near = q < NEAR_CUTOFF
    out[near] = -p[near] ** 2 * (A[near] + 0.5 * q[near] * A[near] ** 2)
    far = ~near
    with np.errstate(divide="ignore", invalid="ignore"):
        val = p[far] ** 2 / q[far] * np.log1p(-q[far] * A[far])
    out[far] = np.where(p[far] == 0, 0.0, val)
    return out


def _breakpoints(T, mu):
    # the integrands live on the scale p ~ T; resolve it explicitly
    scale = T
    pts = [scale * f for f in (0.1, 1.0, 3.0, 10.0, 30.0, 100.0)]
    return [x for x in pts if 0 < x < 1]


def _integrate(f, T, mu):
    return integrate_adaptive(f, 0.0, 1.0, rel_tol=QUAD_REL_TOL, abs_tol=QUAD_ABS_TOL,
                              breakpoints=_breakpoints(T, mu)).value


def _prefactor(point):
    return point.g_s * point.V / (2.0 * math.pi ** 2)


def free_energy(point: ThermoPoint):
    """Free energy F = -PV of the cutoff photon gas, in E*."""
    T, mu = point.T, point.mu
    integral = _integrate(lambda p: free_energy_integrand(p, T, mu), T, mu)
    return _prefactor(point) * T * integral


def internal_energy(point: ThermoPoint):
    """U = g_s V/(2 pi^2) int_0^1 p^3 n(p) dp."""
    T, mu = point.T, point.mu
    integral = _integrate(lambda p: p ** 2 * np.nan_to_num(mean_energy(p, T, mu)), T, mu)
    return _prefactor(point) * integral


def particle_number(point: ThermoPoint):
    """N = g_s V/(2 pi^2) int_0^1 p^2 n(p) dp."""
    T, mu = point.T, point.mu

    def integrand(p):
        # p^2 n(p) -> 0 at p = 0 even when n diverges
        with np.errstate(divide="ignore", invalid="ignore"):
            val = p ** 2 / _denominator(p, T, mu)
        return np.where(p == 0, 0.0, val)

    return _prefactor(point) * _integrate(integrand, T, mu)


def state_functions(point: ThermoPoint):
    """F, U, N, S and P at one thermodynamic point."""
    F = free_energy(point)
    U = internal_energy(point)
    N = particle_number(point)
    S = (U - F - point.mu * N) / point.T
    return StateFunctions(F=F, U=U, N=N, S=S, P=-F / point.V)


def classical_reference(point: ThermoPoint):
    """Standard (uncut) Bose photon-gas values of F, U and N.

    With z = exp(mu/T): F = -g_s V T^4 Li_4(z)/pi^2, U = -3F and
    N = g_s V T^3 Li_3(z)/pi^2.  At mu = 0 these are -pi^2 T^4 V/45,
    pi^2 T^4 V/15 and 2 zeta(3) T^3 V/pi^2 for g_s = 2.
    """
    z = math.exp(point.mu / point.T)
    li4 = float(mpmath.polylog(4, z))
    li3 = float(mpmath.polylog(3, z))
    pref = point.g_s * point.V / math.pi ** 2
    F = -pref * point.T ** 4 * li4
    return StateFunctions(F=F, U=-3.0 * F, N=pref * point.T ** 3 * li3,
                          S=-4.0 * F / point.T - point.mu * pref * point.T ** 3 * li3 / point.T,
                          P=-F / point.V)
