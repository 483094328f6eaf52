import json

import numpy as np
import pytest
from scipy.special import mathieu_a, mathieu_b

from cylwig.basis import PendulumModel, TruncationWarning, WaveFunction
from cylwig.dynamics import (PreconditionError, boundary_field, boundary_potential,
                             calibrate_energy_boundary, calibrate_liouville_boundary,
                             continuity_residual, eigensystem, energy_residual, evolve_density,
                             evolve_schrodinger, liouville_residual, liouville_terms,
                             thermal_state, time_derivative_field, trajectory_jsonl, wigner_field)
from cylwig.kernel import MoyalCoefficients, PhaseSpaceGrid, purity

PENDULUM = PendulumModel.from_gamma(0.5, amplitude=1.0)
SMALL = PhaseSpaceGrid(n_theta=32, pbar_min=-4, pbar_max=4, n_pbar=41)


def _mathieu_levels(model, count):
    # -gamma hbar^2 psi'' - A cos(theta) psi = E psi is Mathieu's equation in z = theta/2
    scale = model.gamma * model.hbar ** 2
    q = 2 * model.amplitude / scale
    vals = [mathieu_a(2 * r, q) for r in range(count)] + [mathieu_b(2 * r, q) for r in range(1, count)]
    return np.sort(0.25 * scale * np.array(vals))[:count]


@pytest.mark.parametrize("amplitude,hbar", [(1.0, 1.0), (3.0, 0.7), (0.2, 1.3)])
def test_spectrum_matches_mathieu_characteristic_values(amplitude, hbar):
    model = PendulumModel.from_gamma(0.5, amplitude=amplitude, hbar=hbar)
    eig = eigensystem(model, 24)
    assert np.allclose(eig.energies[:6], _mathieu_levels(model, 6), atol=1e-8)
    assert eig.residual() < 1e-10


def test_spectrum_deep_well_is_harmonic():
    a = 400.0
    model = PendulumModel(inertia=1.0, amplitude=a)
    eig = eigensystem(model, 48)
    omega = np.sqrt(a / model.inertia)
    assert abs(eig.energies[0] - (-a + 0.5 * omega)) < 0.01 * abs(eig.energies[0])
    assert abs((eig.energies[1] - eig.energies[0]) - omega) < 0.01 * omega


def test_free_rotor_degeneracy_and_ground_parity():
    eig = eigensystem(PendulumModel(inertia=2.0), 6)
    e = eig.energies
    assert np.isclose(e[0], 0)
    for m in range(1, 6):
        assert np.allclose(e[2 * m - 1:2 * m + 1], m ** 2 / 4.0)
    ground = eigensystem(PENDULUM, 10).state(0)
    c = ground.coeffs * np.sign(ground.coeffs[10].real)
    assert np.allclose(c, c[::-1])


def test_unconverged_spectrum_warns():
    with pytest.warns(TruncationWarning):
        eigensystem(PendulumModel(inertia=1.0, amplitude=200.0), 4)


def test_schrodinger_preserves_norm_and_matches_scalar_call():
    psi = WaveFunction.gaussian(16, 0.0, 1.0, 0.5)
    traj = evolve_schrodinger(psi, np.linspace(0, 2, 4), PENDULUM)
    assert all(abs(s.norm() - 1) < 1e-12 for s in traj)
    single = evolve_schrodinger(psi, 2.0, PENDULUM)
    assert np.allclose(single.coeffs, traj[-1].coeffs)


def test_density_evolution_invariants():
    rng = np.random.default_rng(3)
    states = [WaveFunction.random(8, rng, support=5) for _ in range(3)]
    rho0 = MoyalCoefficients.mixture([0.5, 0.3, 0.2], states)
    for r in evolve_density(rho0, [0.0, 0.5, 1.5], PENDULUM):
        assert abs(r.trace() - 1) < 1e-12
        assert np.allclose(r.rho, r.rho.conj().T)
        assert np.isclose(purity(r), purity(rho0))
        assert r.is_positive()


def test_time_derivative_field_is_second_order_accurate():
    psi = WaveFunction.gaussian(16, 0.5, 1.2, 0.3)
    th, pb = np.linspace(-3, 3, 7), np.linspace(-3, 3, 13)
    exact = time_derivative_field(psi, PENDULUM).grid(th, pb)
    errs = []
    for h in (1e-2, 5e-3):
        ahead, behind = evolve_schrodinger(psi, [h, -h], PENDULUM)
        fd = (wigner_field(ahead).grid(th, pb) - wigner_field(behind).grid(th, pb)) / (2 * h)
        errs.append(np.abs(fd - exact).max())
    assert 3.6 < errs[0] / errs[1] < 4.4


def test_boundary_routes_agree_and_scale_with_hbar():
    rng = np.random.default_rng(1)
    a, b = WaveFunction.random(3, rng), WaveFunction.random(3, rng)
    th, p = np.linspace(-3, 3, 5), np.linspace(-2, 2, 7)
    direct = boundary_potential(a, b, th[:, None], p[None, :])
    assert np.allclose(direct, boundary_field(wigner_field((a, b)))(th, p), atol=1e-15)
    # the boundary term carries one power of hbar at fixed pbar
    norms = []
    for hbar in (0.5, 0.25):
        model = PendulumModel(inertia=1.0, hbar=hbar)
        norms.append(np.abs(liouville_terms(a, model, th, p)["boundary"]).max())
    assert np.isclose(norms[0] / norms[1], 2.0)


def test_liouville_free_rotor_and_calibration():
    model = PendulumModel(inertia=0.7, hbar=0.9)
    c, misfit = calibrate_liouville_boundary(model, 0, 1, SMALL)
    assert misfit < 1e-12 and np.isclose(c, 1j * 0.9 / 0.7)
    psi = WaveFunction.from_modes({-2: 1.0, 1: 0.5j}, 4)
    assert liouville_residual(psi, model, SMALL).max_abs < 1e-12


def test_liouville_pendulum_trajectory_and_series():
    psi = WaveFunction.gaussian(24, 0.0, 1.5, 0.0)
    traj = evolve_schrodinger(psi, [0.0, 0.5], PENDULUM)
    assert liouville_residual(traj, PENDULUM, SMALL).max_abs < 1e-10
    r2 = liouville_residual(psi, PENDULUM, SMALL, n_series=2).max_abs
    r6 = liouville_residual(psi, PENDULUM, SMALL, n_series=6).max_abs
    assert r6 < 1e-4 * r2


def test_liouville_needs_the_boundary_term():
    psi = WaveFunction.from_modes({0: 1.0, 1: 1.0}, 2)
    model = PendulumModel()
    assert liouville_residual(psi, model, SMALL, boundary_prefactor=0.0).max_abs > 1e-3


def test_energy_equation_and_calibration():
    eig = eigensystem(PENDULUM, 20)
    for j in range(3):
        assert energy_residual(eig.state(j), PENDULUM, grid=SMALL).max_abs < 1e-9
    assert energy_residual(eig.state(0), PENDULUM, eig.state(2), grid=SMALL).max_abs < 1e-9
    c, misfit = calibrate_energy_boundary(PENDULUM, 2, SMALL)
    assert misfit < 1e-12 and np.isclose(c, -PENDULUM.gamma / np.pi)


def test_energy_rejects_non_eigenstates():
    with pytest.raises(PreconditionError):
        energy_residual(WaveFunction.gaussian(10), PENDULUM)


def test_continuity_needs_source_off_diagonal():
    rng = np.random.default_rng(9)
    # no weight on the outermost mode, so the truncated H acts exactly
    a, b = WaveFunction.random(6, rng, support=5), WaveFunction.random(6, rng, support=5)
    th = np.linspace(-3, 3, 11)
    assert continuity_residual(a, b, PENDULUM, th, 0.8).max() < 1e-12
    assert continuity_residual(a, b, PENDULUM, th, 0.0, source=False).max() < 1e-12
    assert continuity_residual(a, b, PENDULUM, th, 0.8, source=False).max() > 1e-3
    free = PendulumModel()
    assert continuity_residual(a, b, free, th, 0.8, source=False).max() < 1e-12


def test_thermal_limits():
    rho = thermal_state(PENDULUM, 60.0, 12)
    ground = eigensystem(PENDULUM, 12).state(0).coeffs
    assert np.allclose(rho.rho, np.outer(ground, ground.conj()), atol=1e-12)
    hot = thermal_state(PendulumModel(), 1e-6, 4)
    assert np.allclose(np.diag(hot.rho).real, 1 / 9, atol=1e-4)
    with pytest.raises(ValueError):
        thermal_state(PENDULUM, 0.0, 4)


def test_report_and_trajectory_json_are_deterministic():
    psi = WaveFunction.gaussian(8)
    traj = evolve_schrodinger(psi, [0.0, 0.1], PENDULUM)
    text = trajectory_jsonl([0.0, 0.1], traj)
    assert text == trajectory_jsonl([0.0, 0.1], evolve_schrodinger(psi, [0.0, 0.1], PENDULUM))
    rec = json.loads(text.splitlines()[1])
    assert rec["t"] == 0.1 and len(rec["coeffs"]) == 17
    r1 = liouville_residual(traj, PENDULUM, SMALL, times=[0.0, 0.1]).to_json()
    r2 = liouville_residual(traj, PENDULUM, SMALL, times=[0.0, 0.1]).to_json()
    assert r1 == r2 and json.loads(r1)["times"] == [0.0, 0.1]


def test_boundary_closed_form_examples():
    psi = WaveFunction.from_modes({0: 1.0, 1: 1.0}, 2)
    assert np.isclose(boundary_potential(psi, psi, 0.0, 0.0), 2j / (2 * np.pi) ** 2)
    single = WaveFunction.basis(2, 3)
    db = boundary_field(wigner_field(single))(np.linspace(-3, 3, 5), np.linspace(-2, 2, 9), d_theta=1)
    assert np.abs(db).max() == 0.0
    # for (e_m + e_n)/sqrt 2, b vanishes where pbar - (m + n)/2 is an integer
    th = np.linspace(-3, 3, 7)
    vals = boundary_potential(psi, psi, th[:, None], np.array([-1.5, 0.5, 2.5])[None, :])
    assert np.abs(vals).max() < 1e-15
