"""Classical Fourier-mode electrodynamics driven by prescribed charges.

Each partial wave s carries a scalar coordinate phi_s with momentum pi_s
and a vector coordinate a_s = a_1 n_1 + a_2 n_2 + a_3 n_3 with momentum
b_s, where n_1 points along k_s.  With c = 1 and g = V/(8 pi) the
canonical equations are::

    phi' = -pi/g        pi' = g w^2 phi - sum_i e_i cos G_si
    a'   = +b/g         b'  = -g w^2 a  + sum_i e_i v_i sin G_si

with G_si = k_s . r_i(t) + theta_s.  The Lorenz condition per mode reads
w a_1 + phi' = 0 together with its time derivative; both residuals are
recorded at every sample.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .coulomb import ChargeConfig
from .exceptions import DomainError, IntegrationError

MAX_DT_OMEGA = 0.1

STATE_COLUMNS = ("phi", "pi", "a1", "a2", "a3", "b1", "b2", "b3")
HISTORY_COLUMNS = ("t", "mode") + STATE_COLUMNS + ("c1", "c2")


def coupling(V):
    """Mode coupling constant g = V/(8 pi) for a volume V in V*."""
    if not V > 0:
        raise DomainError("volume must be positive")
    return V / (8.0 * math.pi)


def mode_basis(k_vec):
    """Orthonormal triad (n1, n2, n3) as rows, with n1 = k/|k|."""
    k = np.asarray(k_vec, dtype=float)
    norm = np.linalg.norm(k)
    if not (np.isfinite(norm) and norm > 0):
        raise DomainError("wave vector must be finite and non-zero")
    n1 = k / norm
    helper = np.zeros(3)
    helper[np.argmin(np.abs(n1))] = 1.0
    n2 = np.cross(n1, helper)
    n2 /= np.linalg.norm(n2)
    n3 = np.cross(n1, n2)
    return np.stack([n1, n2, n3])


@dataclass(frozen=True)
class Mode:
    """A single partial wave: wave vector and phase shift."""

    k_vec: np.ndarray
    theta: float = 0.0
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        k = np.asarray(self.k_vec, dtype=float).reshape(3)
        object.__setattr__(self, "k_vec", k)
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "basis", mode_basis(k))

    @property
    def omega(self):
        return float(np.linalg.norm(self.k_vec))


class ModeSet:
    """An ordered collection of modes sharing one quantisation volume."""

    def __init__(self, modes: Sequence[Mode], V=1.0):
        self.modes = tuple(modes)
        if not self.modes:
            raise DomainError("a mode set needs at least one mode")
        self.V = float(V)
        self.g = coupling(self.V)
        self.k = np.stack([m.k_vec for m in self.modes])
        self.theta = np.array([m.theta for m in self.modes])
        self.basis = np.stack([m.basis for m in self.modes])
        self.omega = np.linalg.norm(self.k, axis=1)

    def __len__(self):
        return len(self.modes)

    def __getitem__(self, i):
        return self.modes[i]

    @classmethod
    def isotropic_shell(cls, k, n_modes, seed=0, V=1.0):
        """``n_modes`` modes with |k| fixed, uniform random directions and phases."""
        if not k > 0 or n_modes < 1:
            raise DomainError("need k > 0 and n_modes >= 1")
        rng = np.random.Generator(np.random.Philox(key=int(seed)))
        mu = rng.uniform(-1.0, 1.0, n_modes)
        az = rng.uniform(0.0, 2.0 * math.pi, n_modes)
        theta = rng.uniform(0.0, 2.0 * math.pi, n_modes)
        s = np.sqrt(1.0 - mu * mu)
        dirs = np.column_stack([s * np.cos(az), s * np.sin(az), mu])
        return cls([Mode(k * d, th) for d, th in zip(dirs, theta)], V=V)


@dataclass
class ModeState:
    """Canonical field coordinates of one mode."""

    phi: float = 0.0
    pi: float = 0.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(3))
    b: np.ndarray = field(default_factory=lambda: np.zeros(3))
    g: float = 1.0 / (8.0 * math.pi)

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float).reshape(3)
        self.b = np.asarray(self.b, dtype=float).reshape(3)

    def to_array(self):
        return np.concatenate([[self.phi, self.pi], self.a, self.b])

    @classmethod
    def from_array(cls, y, g):
        y = np.asarray(y, dtype=float)
        return cls(float(y[0]), float(y[1]), y[2:5].copy(), y[5:8].copy(), g)


@dataclass(frozen=True)
class Trajectory:
    """Prescribed motion of one point charge.

    ``kind`` is one of ``static``, ``circular``, ``linear-oscillation`` or
    ``custom-sampled``.  For ``circular`` the amplitude is the radius and
    the orbit lies in the plane normal to ``axis``; for
    ``linear-oscillation`` the amplitude is a 3-vector and
    r(t) = center + amplitude sin(frequency t).  ``custom-sampled`` takes
    ``times`` and ``positions`` and interpolates with a cubic spline.
    """

    charge: float
    kind: str = "static"
    center: Sequence[float] = (0.0, 0.0, 0.0)
    amplitude: float | Sequence[float] = 0.0
    frequency: float = 0.0
    axis: Sequence[float] = (0.0, 0.0, 1.0)
    phase: float = 0.0
    times: Sequence[float] | None = None
    positions: Sequence[Sequence[float]] | None = None

    KINDS = ("static", "circular", "linear-oscillation", "custom-sampled")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown trajectory kind {self.kind!r}")
        object.__setattr__(self, "center", np.asarray(self.center, float).reshape(3))
        if self.kind == "circular":
            axis = np.asarray(self.axis, float).reshape(3)
            basis = mode_basis(axis)
            object.__setattr__(self, "_plane", basis[1:])
        elif self.kind == "linear-oscillation":
            object.__setattr__(self, "amplitude",
                               np.asarray(self.amplitude, float).reshape(3))
        elif self.kind == "custom-sampled":
            if self.times is None or self.positions is None:
                raise DomainError("custom-sampled trajectory needs times and positions")
            spline = CubicSpline(np.asarray(self.times, float),
                                 np.asarray(self.positions, float).reshape(-1, 3))
            object.__setattr__(self, "_spline", spline)
            object.__setattr__(self, "_velocity", spline.derivative())

    def __call__(self, t):
        """Position and velocity at time ``t``."""
        if self.kind == "static":
            return self.center, np.zeros(3)
        if self.kind == "circular":
            u, w = self._plane
            wt = self.frequency * t + self.phase
            r = self.center + self.amplitude * (math.cos(wt) * u + math.sin(wt) * w)
            v = self.amplitude * self.frequency * (-math.sin(wt) * u + math.cos(wt) * w)
            return r, v
        if self.kind == "linear-oscillation":
            wt = self.frequency * t + self.phase
            return (self.center + self.amplitude * math.sin(wt),
                    self.amplitude * self.frequency * math.cos(wt))
        return (self.center + self._spline(t), self._velocity(t))

    def speed_bound(self):
        """Upper bound on |v| for the analytic kinds (None for sampled data)."""
        if self.kind == "static":
            return 0.0
        if self.kind == "circular":
            return abs(self.amplitude * self.frequency)
        if self.kind == "linear-oscillation":
            return float(np.linalg.norm(self.amplitude) * abs(self.frequency))
        return None


def _charges_at(trajectories, t):
    e = np.array([tr.charge for tr in trajectories], dtype=float)
    if not trajectories:
        return e, np.zeros((0, 3)), np.zeros((0, 3))
    rv = [tr(t) for tr in trajectories]
    r = np.array([p for p, _ in rv], dtype=float)
    v = np.array([q for _, q in rv], dtype=float)
    return e, r, v


def _sources(k, theta, basis, g, e, r, v):
    """Scalar (n_modes,) and vector (n_modes, 3) sources in mode coordinates."""
    if e.size == 0:
        return np.zeros(k.shape[0]), np.zeros((k.shape[0], 3))
    gamma = k @ r.T + theta[:, None]
    scalar = np.cos(gamma) @ e / g
    # project each velocity on the mode triad: (n_modes, 3, n_charges)
    v_proj = np.einsum("mij,nj->min", basis, v)
    vector = np.einsum("min,mn->mi", v_proj, e[None, :] * np.sin(gamma)) / g
    return scalar, vector


def source_terms(mode, charges, velocities, g):
    """Right-hand sides of the sourced oscillator equations for one mode.

    Parameters
    ----------
    mode : Mode
    charges : ChargeConfig
        Charges with their positions at the evaluation time.
    velocities : array_like, shape (n, 3)
    g : float
        Coupling constant V/(8 pi).

    Returns
    -------
    scalar_source : float
        (1/g) sum_i e_i cos G_si
    vector_source : ndarray, shape (3,)
        (1/g) sum_i e_i v_i sin G_si, in the (n1, n2, n3) basis.
    """
    v = np.asarray(velocities, dtype=float).reshape(-1, 3)
    if v.shape[0] != len(charges):
        raise DomainError("need one velocity per charge")
    s, vec = _sources(mode.k_vec[None, :], np.array([mode.theta]), mode.basis[None],
                      g, charges.charges, charges.positions, v)
    return float(s[0]), vec[0]


def lorenz_residual(state, mode, charges, velocities):
    """Lorenz constraint residuals (c1, c2) for one mode.

    c1 = w a_1 - pi/g and c2 = w b_1/g - w^2 phi + scalar_source; both
    vanish on states obeying the gauge condition.
    """
    g = state.g
    w = mode.omega
    s, _ = source_terms(mode, charges, velocities, g)
    c1 = w * state.a[0] - state.pi / g
    c2 = w * state.b[0] / g - w * w * state.phi + s
    return float(c1), float(c2)


def _residuals(y, omega, g, scalar):
    c1 = omega * y[:, 2] - y[:, 1] / g
    c2 = omega * y[:, 5] / g - omega ** 2 * y[:, 0] + scalar
    return np.column_stack([c1, c2])


def lorenz_initial_state(modes, trajectories, t0=0.0, base=None):
    """Initial states satisfying both Lorenz constraints at ``t0``.

    Starting from ``base`` (zeros by default), a_1 and b_1 are replaced by
    the values that make c1 = c2 = 0; everything else is kept.
    """
    y = np.zeros((len(modes), 8)) if base is None else np.array(base, dtype=float)
    e, r, v = _charges_at(trajectories, t0)
    scalar, _ = _sources(modes.k, modes.theta, modes.basis, modes.g, e, r, v)
    w, g = modes.omega, modes.g
    y[:, 2] = y[:, 1] / (g * w)
    y[:, 5] = g * (w * w * y[:, 0] - scalar) / w
    return y


@dataclass
class ModeHistory:
    """Sampled trajectory of all mode coordinates plus constraint residuals.

    ``states`` has shape (n_samples, n_modes, 8) in the column order of
    ``STATE_COLUMNS``; ``residuals`` has shape (n_samples, n_modes, 2).
    """

    times: np.ndarray
    states: np.ndarray
    residuals: np.ndarray
    omega: np.ndarray
    g: float

    def state(self, sample, mode):
        return ModeState.from_array(self.states[sample, mode], self.g)

    def energies(self):
        """Per-mode (vector-sector, scalar-sector) energies at each sample.

        The field Hamiltonian is their difference; the scalar sector enters
        with a negative sign so the two are reported separately.
        """
        g, w2 = self.g, self.omega ** 2
        a = self.states[..., 2:5]
        b = self.states[..., 5:8]
        vec = (np.sum(b * b, axis=-1) + g * g * w2 * np.sum(a * a, axis=-1)) / (2 * g)
        phi = self.states[..., 0]
        pi = self.states[..., 1]
        sca = (pi * pi + g * g * w2 * phi * phi) / (2 * g)
        return vec, sca

    def rows(self):
        for i, t in enumerate(self.times):
            for m in range(self.states.shape[1]):
                yield [float(t), m, *map(float, self.states[i, m]),
                       *map(float, self.residuals[i, m])]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(HISTORY_COLUMNS)
            for row in self.rows():
                writer.writerow([repr(x) for x in row])


def integrate(modes, trajectories, dt, n_steps, initial=None, t0=0.0, sample_every=1):
    """Advance all modes with the classical fourth-order Runge-Kutta method.

    Parameters
    ----------
    modes : ModeSet
    trajectories : sequence of Trajectory
    dt : float
        Step size; ``dt * max(omega)`` may not exceed 0.1.
    n_steps : int
    initial : array_like (n_modes, 8) or sequence of ModeState, optional
        Zero state if omitted.
    t0 : float
    sample_every : int
        Keep every n-th step (the initial and final states are always kept).

    Returns
    -------
    ModeHistory

    Raises
    ------
    DomainError
        If the resolution guard is violated or a charge reaches |v| >= 1.
    IntegrationError
        If the state becomes non-finite.
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    if dt * modes.omega.max() > MAX_DT_OMEGA:
        raise DomainError(
            f"dt*omega = {dt * modes.omega.max():.3g} exceeds {MAX_DT_OMEGA}")
    n_steps = int(n_steps)
    if n_steps < 0 or sample_every < 1:
        raise DomainError("n_steps >= 0 and sample_every >= 1 required")
    trajectories = list(trajectories)
    for tr in trajectories:
        bound = tr.speed_bound()
        if bound is not None and bound >= 1.0:
            raise DomainError(f"charge speed {bound} reaches the speed of light")

    k, theta, basis, w, g = modes.k, modes.theta, modes.basis, modes.omega, modes.g
    w2 = w * w
    if initial is None:
        y = np.zeros((len(modes), 8))
    elif isinstance(initial, np.ndarray) or not isinstance(initial[0], ModeState):
        y = np.array(initial, dtype=float).reshape(len(modes), 8)
    else:
        y = np.stack([s.to_array() for s in initial])

    def sources(t):
        e, r, v = _charges_at(trajectories, t)
        if v.size and np.any(np.einsum("ij,ij->i", v, v) >= 1.0):
            raise DomainError(f"charge speed reaches 1 at t = {t}")
        return _sources(k, theta, basis, g, e, r, v)

    def rhs(t, y, src=None):
        s, vec = sources(t) if src is None else src
        dy = np.empty_like(y)
        dy[:, 0] = -y[:, 1] / g
        dy[:, 1] = g * w2 * y[:, 0] - g * s
        dy[:, 2:5] = y[:, 5:8] / g
        dy[:, 5:8] = -g * w2[:, None] * y[:, 2:5] + g * vec
        return dy

    times, states, residuals = [], [], []

    def record(t, y, src):
        times.append(t)
        states.append(y.copy())
        residuals.append(_residuals(y, w, g, src[0]))

    t = t0
    src = sources(t)
    record(t, y, src)
    for step in range(1, n_steps + 1):
        k1 = rhs(t, y, src)
        mid = sources(t + 0.5 * dt)
        k2 = rhs(t, y + 0.5 * dt * k1, mid)
        k3 = rhs(t, y + 0.5 * dt * k2, mid)
        t_next = t0 + step * dt
        src = sources(t_next)
        k4 = rhs(t_next, y + dt * k3, src)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t_next
        if not np.all(np.isfinite(y)):
            raise IntegrationError("non-finite mode state", step)
        if step % sample_every == 0 or step == n_steps:
            record(t, y, src)

    return ModeHistory(np.array(times), np.array(states), np.array(residuals), w, g)


def charges_at(trajectories, t):
    """ChargeConfig and velocities of the trajectories at time ``t``."""
    e, r, v = _charges_at(list(trajectories), t)
    return ChargeConfig(e, r), v
