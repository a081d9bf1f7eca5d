"""Brute-force checks of the cutoff results and the mode-counting formulas.

The kernel oracles rebuild (2/pi) Si(k* r)/r from the wave-number integral
instead of the sine integral: once by 1-D quadrature, once by Monte-Carlo
averaging over |k| and the direction cosine between k and r_ij.  The
zero-point energy, state count and energy ratio are the closed forms of
the cutoff mode sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coulomb import self_energy
from .exceptions import DomainError
from .specfun import integrate_adaptive, sinc
from .units import make_scale

SIX_PI_SQ = 6.0 * math.pi ** 2
SIXTEEN_PI_SQ = 16.0 * math.pi ** 2

MC_CHUNK = 1 << 16
MIN_MC_SAMPLES = 1000


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def kernel_quadrature_oracle(r, k_star=1.0, rel_tol=1e-12, abs_tol=1e-13):
    """(2/pi) * integral_0^k* sin(kr)/(kr) dk by adaptive quadrature."""
    if not (r > 0 and k_star > 0):
        raise DomainError("need r > 0 and k_star > 0")
    # one breakpoint per half period keeps every panel non-oscillatory
    n_half = int(k_star * r / math.pi)
    breaks = None
    if n_half > 1:
        breaks = np.arange(1, n_half + 1) * (math.pi / r)
    res = integrate_adaptive(
        lambda k: sinc(k * r), 0.0, k_star, rel_tol=rel_tol, abs_tol=abs_tol,
        breakpoints=breaks,
    )
    return 2.0 / math.pi * res.value


def _rng(seed):
    return np.random.Generator(np.random.Philox(key=seed))


def kernel_mc_oracle(r_i, r_j, k_star=1.0, n_samples=100_000, seed=0):
    """Monte-Carlo estimate of the pair kernel between two points.

    Draws |k| uniform on [0, k*] and the direction cosine mu uniform on
    [-1, 1].  After averaging the phase shift out of
    cos(k.r_i + theta) cos(k.r_j + theta) only cos(k r_ij mu)/2 is left,
    so the estimator is (4/pi) k* cos(k r_ij mu)/2.

    The Philox stream is keyed by ``seed`` and consumed in fixed-size
    chunks, so equal arguments give bit-identical results.
    """
    r_ij = float(np.linalg.norm(np.asarray(r_i, float) - np.asarray(r_j, float)))
    if r_ij == 0.0:
        raise DomainError("coincident positions; use kernel(0) instead")
    if k_star <= 0:
        raise DomainError("k_star must be positive")
    n_samples = int(n_samples)
    if n_samples < MIN_MC_SAMPLES:
        raise DomainError(f"n_samples must be at least {MIN_MC_SAMPLES}")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be an unsigned 64-bit integer")

    rng = _rng(seed)
    scale = 2.0 / math.pi * k_star
    total = 0.0
    total_sq = 0.0
    left = n_samples
    while left:
        m = min(left, MC_CHUNK)
        k = rng.uniform(0.0, k_star, m)
        mu = rng.uniform(-1.0, 1.0, m)
        x = scale * np.cos(k * r_ij * mu)
        total += float(x.sum())
        total_sq += float((x * x).sum())
        left -= m
    mean = float(total / n_samples)
    var = max(total_sq / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    return McEstimate(mean, math.sqrt(var / n_samples), n_samples, seed)


def _check_volume(V):
    if not (math.isfinite(V) and V >= 0):
        raise DomainError(f"volume must be finite and non-negative, got {V!r}")


def zero_point_energy(V):
    """Zero-point energy V/(16 pi^2) in E* of the field in volume V (in V*)."""
    _check_volume(V)
    return V / SIXTEEN_PI_SQ


def zero_point_energy_integral(V, k_star=1.0, rel_tol=1e-13, abs_tol=1e-15):
    """Same energy as the mode integral (V/4pi^2) int_0^k* k^3 dk, by quadrature."""
    _check_volume(V)
    res = integrate_adaptive(lambda k: k ** 3, 0.0, k_star, rel_tol, abs_tol)
    return V / (4.0 * math.pi ** 2) * res.value


def state_count(V):
    """Maximum number of quantum states V/(6 pi^2) in volume V."""
    _check_volume(V)
    return V / SIX_PI_SQ


def quantized_volume(n):
    """Volume 6 pi^2 N V* holding exactly ``n`` states."""
    return SIX_PI_SQ * n


def zero_point_to_self_energy_ratio(V, scale=None):
    """Zero-point energy in V divided by the electron self-energy: V/(16 pi alpha)."""
    _check_volume(V)
    if scale is None:
        scale = make_scale()
    return zero_point_energy(V) / self_energy(1.0, scale)
