"""Sine integral and the adaptive quadrature engine.

``sine_integral`` switches between a power series for small arguments and
the auxiliary functions f, g (evaluated by a continued fraction) for large
ones.  ``integrate_adaptive`` is a vectorised Gauss-Kronrod (7, 15)
bisection scheme; it is deliberately independent of the Si code so it can
serve as an oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DomainError

SERIES_MAX = 8.0
ASYMPTOTIC_MIN = 2.0
CROSSOVER = 4.0

_FPMIN = 1e-300
_CF_EPS = 1e-16
_CF_MAXIT = 10000

# Gauss-Kronrod 15-point abscissae and weights on [-1, 1] (QUADPACK qk15),
# non-negative half.  The 7-point Gauss rule uses every other Kronrod node.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]

MAX_EVALUATIONS = 1_000_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


def integrate_adaptive(f, a, b, rel_tol=1e-10, abs_tol=1e-12, breakpoints=None,
                       max_evaluations=MAX_EVALUATIONS):
    """Integrate ``f`` over ``[a, b]`` by adaptive Gauss-Kronrod bisection.

    Parameters
    ----------
    f : callable
        Vectorised integrand; called with 1-D float arrays and must return
        an array of the same shape.  Never evaluated at ``a`` or ``b``.
    a, b : float
        Finite limits with ``a <= b``.
    rel_tol, abs_tol : float
        The target is ``max(abs_tol, rel_tol * |value|)``.
    breakpoints : sequence of float, optional
        Interior points used to seed the initial partition.
    max_evaluations : int
        Budget of integrand evaluations.

    Returns
    -------
    QuadratureResult

    Raises
    ------
    ConvergenceError
        If the budget is exhausted; the partial estimate is attached.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)) or a > b:
        raise DomainError(f"need finite a <= b, got [{a}, {b}]")
    if not (rel_tol > 0 and abs_tol > 0):
        raise DomainError("tolerances must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 1)

    edges = [a]
    if breakpoints is not None:
        edges += sorted(float(p) for p in breakpoints if a < p < b)
    edges.append(b)
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    length = b - a

    done_value = 0.0
    done_error = 0.0
    evaluations = 0
    while True:
        centre = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = centre[:, None] + half[:, None] * NODES
        fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
        evaluations += fx.size
        kronrod = half * (fx @ KRONROD_WEIGHTS)
        gauss = half * (fx @ GAUSS_WEIGHTS)
        resabs = half * (np.abs(fx) @ KRONROD_WEIGHTS)
        err = np.abs(kronrod - gauss)
        if not np.all(np.isfinite(kronrod)):
            raise ConvergenceError("integrand not finite on [%g, %g]" % (a, b),
                                   evaluations=evaluations)

        total = done_value + kronrod.sum()
        target = max(abs_tol, rel_tol * abs(total))
        share = target * (hi - lo) / length
        # roundoff floor: an interval cannot be resolved below a few ulps
        ok = (err <= share) | (err <= 50.0 * np.finfo(float).eps * resabs)
        done_value += kronrod[ok].sum()
        done_error += err[ok].sum()

        # global test as well: endpoint singularities never meet the local share
        if ok.all() or done_error + err[~ok].sum() <= target:
            return QuadratureResult(float(total), float(done_error + err[~ok].sum()),
                                    evaluations)

        lo, hi, centre = lo[~ok], hi[~ok], centre[~ok]
        if evaluations + 30 * lo.size > max_evaluations:
            raise ConvergenceError(
                f"no convergence within {max_evaluations} evaluations",
                estimate=float(total),
                error_estimate=float(done_error + err[~ok].sum()),
                evaluations=evaluations,
            )
        lo, hi = np.concatenate([lo, centre]), np.concatenate([centre, hi])


def _check_argument(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("Si argument must be finite")
    if np.any(arr < 0):
        raise DomainError("Si argument must be non-negative")
    return arr


def si_series(x, tol=1e-17, max_terms=None):
    """Power series x - x^3/(3*3!) + x^5/(5*5!) - ... for 0 <= x <= 8.

    Summation stops once the next term is smaller than ``tol`` in
    magnitude, or after ``max_terms`` terms if given.
    """
    arr = _check_argument(x)
    if np.any(arr > SERIES_MAX):
        raise DomainError(f"series branch limited to x <= {SERIES_MAX}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    x2 = arr * arr
    power = arr.copy()            # (-1)^k x^(2k+1) / (2k+1)!
    total = np.zeros_like(arr)
    k = 0
    while True:
        term = power / (2 * k + 1)
        total += term
        k += 1
        if max_terms is not None and k >= max_terms:
            break
        power = -power * x2 / ((2 * k) * (2 * k + 1))
        if np.all(np.abs(power / (2 * k + 1)) < tol):
            break
    return total if total.ndim else float(total)


def auxiliary_fg(x):
    """Auxiliary functions f(x), g(x) with Si(x) = pi/2 - f cos x - g sin x.

    Evaluated through the continued fraction for exp(ix) E1(ix) = g - i f,
    using the modified Lentz algorithm; valid for x >= 2.
    """
    arr = _check_argument(x)
    if np.any(arr < ASYMPTOTIC_MIN):
        raise DomainError(f"auxiliary branch needs x >= {ASYMPTOTIC_MIN}")
    t = np.atleast_1d(arr).astype(float)
    b = 1.0 + 1j * t
    c = np.full(t.shape, 1.0 / _FPMIN, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(t.shape, dtype=bool)
    for i in range(2, _CF_MAXIT):
        a = -float((i - 1) ** 2)
        b = b + 2.0
        d[active] = 1.0 / (a * d[active] + b[active])
        c[active] = b[active] + a / c[active]
        delta = c[active] * d[active]
        h[active] *= delta
        converged = np.abs(delta.real - 1.0) + np.abs(delta.imag) < _CF_EPS
        idx = np.flatnonzero(active)
        active[idx[converged]] = False
        if not active.any():
            break
    else:
        raise ConvergenceError("continued fraction for Si did not converge")
    f, g = -h.imag, h.real
    if np.ndim(arr) == 0:
        return float(f[0]), float(g[0])
    return f, g


def si_asymptotic(x):
    """Si(x) = pi/2 - f(x) cos x - g(x) sin x, for x >= 2."""
    arr = _check_argument(x)
    f, g = auxiliary_fg(arr)
    result = 0.5 * np.pi - f * np.cos(arr) - g * np.sin(arr)
    return result if np.ndim(result) else float(result)


def sine_integral(x):
    """Si(x) = integral of sin(t)/t from 0 to x, for finite x >= 0.

    Accepts scalars or arrays.  Absolute error is below 1e-12.
    """
    arr = _check_argument(x)
    out = np.empty(arr.shape)
    small = arr <= CROSSOVER
    if small.any():
        out[small] = si_series(arr[small])
    if (~small).any():
        out[~small] = si_asymptotic(arr[~small])
    return out if out.ndim else float(out)


def sinc(t):
    """sin(t)/t with the removable singularity at 0 filled in."""
    return np.sinc(np.asarray(t, dtype=float) / np.pi)
