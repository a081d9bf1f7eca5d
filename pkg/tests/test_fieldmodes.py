import csv
import math

import numpy as np
import pytest

from planckqed.coulomb import ChargeConfig
from planckqed.exceptions import DomainError, IntegrationError
from planckqed.fieldmodes import (HISTORY_COLUMNS, Mode, ModeSet, ModeState, Trajectory,
                                  charges_at, integrate, lorenz_initial_state,
                                  lorenz_residual, mode_basis, source_terms)

G = 1 / (8 * math.pi)


def test_basis_orthonormal():
    rng = np.random.default_rng(1)
    for k in rng.normal(size=(20, 3)):
        b = mode_basis(k)
        assert np.allclose(b @ b.T, np.eye(3), atol=1e-14)
        assert np.allclose(b[0], k / np.linalg.norm(k))


def test_mode_omega():
    assert Mode([3.0, 4.0, 0.0]).omega == pytest.approx(5.0)
    with pytest.raises(DomainError):
        Mode([0, 0, 0])


def test_shell_is_seeded():
    a = ModeSet.isotropic_shell(2.0, 5, seed=4)
    b = ModeSet.isotropic_shell(2.0, 5, seed=4)
    assert np.array_equal(a.k, b.k) and np.array_equal(a.theta, b.theta)
    assert np.allclose(a.omega, 2.0)


class TestSources:
    def test_no_charges(self):
        s, v = source_terms(Mode([1, 0, 0]), ChargeConfig.from_pairs([]), np.zeros((0, 3)), G)
        assert s == 0.0 and np.all(v == 0)

    def test_static_charge_at_origin(self):
        c = ChargeConfig([1.0], [[0, 0, 0]])
        s, v = source_terms(Mode([1, 2, 0]), c, [[0, 0, 0]], G)
        assert s == pytest.approx(1 / G)
        assert np.all(v == 0)

    def test_cancelling_pair(self):
        c = ChargeConfig([1.0, -1.0], [[0.3, 0.1, 0.2]] * 2)
        s, v = source_terms(Mode([1, 2, 0], 0.4), c, [[0.1, 0, 0]] * 2, G)
        assert s == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(v, 0.0, atol=1e-12)

    def test_vector_source_projection(self):
        mode = Mode([0, 0, 2.0], theta=0.5)
        c = ChargeConfig([2.0], [[0.1, 0.2, 0.3]])
        vel = np.array([0.1, -0.2, 0.3])
        s, v = source_terms(mode, c, [vel], G)
        gamma = 2.0 * 0.3 + 0.5
        assert s == pytest.approx(2 * math.cos(gamma) / G)
        assert np.allclose(v, mode.basis @ vel * 2 * math.sin(gamma) / G)


class TestIntegrate:
    def test_zero_state_stays_zero(self):
        h = integrate(ModeSet([Mode([1, 0, 0])]), [], 0.01, 100)
        assert np.all(h.states == 0)

    def test_free_oscillation(self):
        w = 2.0
        n = 629
        dt = 2 * math.pi / (n * w)
        ms = ModeSet([Mode([0, w, 0])])
        h = integrate(ms, [], dt, n, initial=[ModeState(phi=1.0, g=ms.g)])
        assert h.times[-1] * w == pytest.approx(2 * math.pi)
        assert h.states[-1, 0, 0] == pytest.approx(1.0, abs=1e-8)
        t = h.times
        assert np.allclose(h.states[:, 0, 0], np.cos(w * t), atol=1e-8)

    def test_static_solution(self):
        ms = ModeSet([Mode([1.3, 0.0, 0.4], 0.2)])
        tr = Trajectory(1.0, "static", center=(0.3, -0.2, 0.5))
        charges, vel = charges_at([tr], 0.0)
        s, _ = source_terms(ms[0], charges, vel, ms.g)
        y0 = np.zeros((1, 8))
        y0[0, 0] = s / ms.omega[0] ** 2
        h = integrate(ms, [tr], 0.01 / ms.omega[0], 1000, initial=y0)
        assert np.max(np.abs(h.states[:, 0, 0] - y0[0, 0])) <= 1e-10
        state = h.state(0, 0)
        assert lorenz_residual(state, ms[0], charges, vel) == pytest.approx((0, 0), abs=1e-12)

    def test_canonical_relations(self):
        ms = ModeSet([Mode([0.7, 0.1, 0.0], 1.0)])
        tr = Trajectory(1.0, "linear-oscillation", amplitude=(0.2, 0.1, 0), frequency=0.5)
        dt = 0.01
        h = integrate(ms, [tr], dt, 400, initial=lorenz_initial_state(ms, [tr]))
        y = h.states[:, 0]
        # central differences of phi and a against -pi/g and b/g
        dphi = (y[2:, 0] - y[:-2, 0]) / (2 * dt)
        da = (y[2:, 2:5] - y[:-2, 2:5]) / (2 * dt)
        assert np.allclose(dphi, -y[1:-1, 1] / ms.g, atol=1e-4)
        assert np.allclose(da, y[1:-1, 5:8] / ms.g, atol=1e-4)

    def test_lorenz_propagation(self):
        ms = ModeSet.isotropic_shell(1.0, 4, seed=9)
        tr = Trajectory(-1.0, "circular", center=(0.1, 0, 0), amplitude=0.4, frequency=0.5,
                        axis=(1, 1, 0))
        h = integrate(ms, [tr], 0.01, 3000, initial=lorenz_initial_state(ms, [tr]))
        assert np.max(np.abs(h.residuals)) <= 1e-6 * np.max(np.abs(h.states))

    def test_linearity_in_sources(self):
        ms = ModeSet.isotropic_shell(1.5, 3, seed=2)
        t1 = Trajectory(1.0, "circular", amplitude=0.3, frequency=0.8)
        t2 = Trajectory(-0.5, "linear-oscillation", center=(1, 0, 0),
                        amplitude=(0, 0.2, 0.1), frequency=1.1)
        run = lambda trs: integrate(ms, trs, 0.005, 500).states
        assert np.allclose(run([t1, t2]), run([t1]) + run([t2]), atol=1e-10, rtol=0)

    def test_free_energy_conserved(self):
        ms = ModeSet([Mode([1.0, 0.5, 0.2], 0.3)])
        y0 = np.array([[1, 0.3, 0.2, -0.5, 0.1, 0.01, 0.02, -0.03]])
        h = integrate(ms, [], 0.01 / ms.omega[0], 10_000, initial=y0, sample_every=100)
        vec, sca = h.energies()
        assert np.max(np.abs(vec - vec[0])) <= 1e-8 * vec[0, 0]
        assert np.max(np.abs(sca - sca[0])) <= 1e-8 * sca[0, 0]

    def test_resolution_guard(self):
        with pytest.raises(DomainError):
            integrate(ModeSet([Mode([10, 0, 0])]), [], 0.02, 10)

    def test_superluminal_charge(self):
        tr = Trajectory(1.0, "circular", amplitude=2.0, frequency=0.6)
        with pytest.raises(DomainError):
            integrate(ModeSet([Mode([1, 0, 0])]), [tr], 0.01, 10)

    def test_non_finite_state(self):
        y0 = np.full((1, 8), np.nan)
        with pytest.raises(IntegrationError) as info:
            integrate(ModeSet([Mode([1, 0, 0])]), [], 0.01, 5, initial=y0)
        assert info.value.step == 1

    def test_sampling(self):
        h = integrate(ModeSet([Mode([1, 0, 0])]), [], 0.01, 25, sample_every=10)
        assert np.allclose(h.times, [0.0, 0.1, 0.2, 0.25])


class TestResidual:
    def test_zero(self):
        st = ModeState(g=G)
        assert lorenz_residual(st, Mode([1, 0, 0]), ChargeConfig.from_pairs([]),
                               np.zeros((0, 3))) == (0.0, 0.0)

    def test_unconstrained_state(self):
        rng = np.random.default_rng(0)
        st = ModeState.from_array(rng.normal(size=8), G)
        c1, c2 = lorenz_residual(st, Mode([1, 1, 0]), ChargeConfig.from_pairs([]),
                                 np.zeros((0, 3)))
        assert abs(c1) > 1e-3 and abs(c2) > 1e-3


def test_custom_sampled_trajectory():
    times = np.linspace(0, 10, 201)
    pos = np.column_stack([0.2 * np.sin(0.5 * times), np.zeros_like(times), np.zeros_like(times)])
    tr = Trajectory(1.0, "custom-sampled", times=times, positions=pos)
    r, v = tr(3.3)
    assert r[0] == pytest.approx(0.2 * math.sin(1.65), abs=1e-6)
    assert v[0] == pytest.approx(0.1 * math.cos(1.65), abs=1e-5)


def test_history_csv(tmp_path):
    ms = ModeSet.isotropic_shell(1.0, 2, seed=0)
    tr = Trajectory(1.0, "circular", amplitude=0.3, frequency=0.5)
    h = integrate(ms, [tr], 0.01, 5, initial=lorenz_initial_state(ms, [tr]))
    path = tmp_path / "h.csv"
    h.write_csv(path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == HISTORY_COLUMNS
    assert len(rows) == 1 + 6 * 2
    assert float(rows[-1][HISTORY_COLUMNS.index("phi")]) == h.states[-1, 1, 0]
