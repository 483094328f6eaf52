"""Pendulum dynamics on the circle and the phase-space equations of motion.

The Hilbert-space side (spectral solver, Schrodinger and von Neumann flows,
thermal states) is the oracle.  The phase-space side evaluates the terms of
the generalized Liouville equation

    dV/dt + (p/I) dV/dtheta
        = sum_k U_k'(theta) / (k hbar) [V(p + k hbar/2) - V(p - k hbar/2)]
          + (i hbar / I) d/dtheta b,

and of the stationary energy equation on ShiftedSincField data, where b is
the boundary potential: the difference of the Moyal integrand at the ends
of the angle-difference interval,

    b = (1/(2pi)^2) [e^{-i pbar v} conj(psi2(theta - v/2)) psi1(theta + v/2)]_{v=-pi}^{v=pi}.

The shift differences are expanded, for diagnostics, as the classical drift
U_k' dV/dp plus the odd series sum_n (k hbar/2)^{2n} / (2n+1)! d^{2n+1}V/dp^{2n+1}.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .basis import PendulumModel, TruncationWarning, WaveFunction, evaluate, standard_operator
from .field import ShiftedSincField
from .kernel import MoyalCoefficients, PhaseSpaceGrid

__all__ = [
    "PreconditionError",
    "EigenSystem",
    "ResidualReport",
    "eigensystem",
    "evolve_schrodinger",
    "evolve_density",
    "thermal_state",
    "thermal_omega",
    "bloch_residual",
    "wigner_field",
    "time_derivative_field",
    "boundary_potential",
    "boundary_field",
    "liouville_boundary_prefactor",
    "liouville_terms",
    "liouville_residual",
    "calibrate_liouville_boundary",
    "diagonal_density_rhs",
    "quantum_side_diagonal",
    "energy_terms",
    "energy_residual",
    "calibrate_energy_boundary",
    "continuity_residual",
    "trajectory_jsonl",
]


class PreconditionError(ValueError):
    """Input violates a precondition that makes the result meaningless."""


# ---------------------------------------------------------------------------
# Hilbert-space oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Sorted eigenpairs of the truncated Hamiltonian.

    Attributes
    ----------
    energies : ndarray
        Ascending eigenvalues.
    vectors : ndarray
        Orthonormal eigenvectors as columns, over the Fourier basis.
    truncation_error : float
        Largest change of the ``n_check`` lowest eigenvalues when the window
        is doubled.
    """

    model: PendulumModel
    n_max: int
    energies: np.ndarray
    vectors: np.ndarray
    truncation_error: float = 0.0

    def state(self, j):
        return WaveFunction(self.n_max, self.vectors[:, j])

    def residual(self):
        h = standard_operator("H", self.n_max, model=self.model).entries
        return float(np.abs(h @ self.vectors - self.vectors * self.energies).max())

    def propagator(self, t):
        phase = np.exp(-1j * self.energies * t / self.model.hbar)
        return (self.vectors * phase) @ self.vectors.conj().T


def eigensystem(model, n_max, n_check=4, tol=1e-10, check=True):
    """Diagonalize the pendulum matrix; the ``n_check`` lowest levels are
    compared with a doubled window and a TruncationWarning is issued when
    they move by more than ``tol`` (relative to the level spacing scale)."""
    h = standard_operator("H", n_max, model=model)
    energies, vectors = np.linalg.eigh(h.entries)
    err = 0.0
    if check:
        big = np.linalg.eigvalsh(standard_operator("H", 2 * n_max, model=model).entries)
        n = min(n_check, energies.size)
        scale = max(1.0, float(np.abs(energies[:n]).max()))
        err = float(np.abs(big[:n] - energies[:n]).max()) / scale
        if err > tol:
            warnings.warn(f"lowest {n} levels not converged at n_max={n_max} (change {err:.2e})",
                          TruncationWarning, stacklevel=2)
    return EigenSystem(model, n_max, energies, vectors, err)


def _eig(model, n_max, eig):
    if eig is None or eig.n_max != n_max:
        return eigensystem(model, n_max, check=False)
    return eig


def evolve_schrodinger(psi0, t, model, eig=None):
    """c(t) = exp(-iHt/hbar) c(0).  Returns one WaveFunction for scalar t,
    a list for a sequence of times."""
    eig = _eig(model, psi0.n_max, eig)
    overlap = eig.vectors.conj().T @ psi0.coeffs
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = [WaveFunction(psi0.n_max,
                        eig.vectors @ (np.exp(-1j * eig.energies * s / model.hbar) * overlap))
           for s in times]
    return out[0] if np.ndim(t) == 0 else out


def evolve_density(rho0, t, model, eig=None):
    """rho(t) = U rho0 U^dagger with U = exp(-iHt/hbar)."""
    rho0 = rho0 if isinstance(rho0, MoyalCoefficients) else MoyalCoefficients(
        (np.asarray(rho0).shape[0] - 1) // 2, rho0)
    eig = _eig(model, rho0.n_max, eig)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = []
    for s in times:
        u = eig.propagator(s)
        r = u @ rho0.rho @ u.conj().T
        out.append(MoyalCoefficients(rho0.n_max, 0.5 * (r + r.conj().T), rho0.is_density))
    return out[0] if np.ndim(t) == 0 else out


def thermal_omega(model, n_max, eig=None):
    """Shifted Boltzmann operator beta -> exp(-beta (H - E0)), with E0 the
    ground energy, plus the shifted Hamiltonian H - E0.  The shift keeps the
    largest weight at one for every beta, so nothing underflows to zero."""
    eig = _eig(model, n_max, eig)
    e = eig.energies - eig.energies[0]
    v = eig.vectors

    def omega(beta):
        return (v * np.exp(-beta * e)) @ v.conj().T

    h = standard_operator("H", n_max, model=model).entries - eig.energies[0] * np.eye(2 * n_max + 1)
    return omega, h


def thermal_state(model, beta, n_max, eig=None):
    """rho(beta) = exp(-beta H) / Z, computed in the log domain."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    omega, _ = thermal_omega(model, n_max, eig)
    w = omega(beta)
    rho = w / np.trace(w).real
    return MoyalCoefficients(n_max, 0.5 * (rho + rho.conj().T))


def bloch_residual(model, beta, step, n_max, eig=None):
    """|| (Omega(beta+h) - Omega(beta-h)) / 2h + (H - E0) Omega(beta) ||_F for
    the shifted Boltzmann operator; vanishes at second order in h."""
    omega, h = thermal_omega(model, n_max, eig)
    deriv = (omega(beta + step) - omega(beta - step)) / (2 * step)
    return float(np.linalg.norm(deriv + h @ omega(beta)))


# ---------------------------------------------------------------------------
# phase-space fields of states
# ---------------------------------------------------------------------------

def _operator_of(state):
    """Matrix R with V = tr[R V(theta, p)]."""
    if isinstance(state, WaveFunction):
        return np.outer(state.coeffs, state.coeffs.conj())
    if isinstance(state, MoyalCoefficients):
        return np.asarray(state.rho)
    if isinstance(state, tuple) and len(state) == 2:
        psi2, psi1 = state
        return np.outer(psi1.coeffs, psi2.coeffs.conj())
    return np.asarray(state, dtype=complex)


def wigner_field(state):
    """ShiftedSincField of a wave function, a Moyal pair (psi2, psi1) or a
    density matrix; coefficient of (k, s) collects conj(c2_m) c1_n / 2pi with
    k = n - m, s = (m + n)/2."""
    return ShiftedSincField.from_operator(_operator_of(state))


def time_derivative_field(state, model):
    """Field of dV/dt from the Schrodinger flow dR/dt = -(i/hbar)[H, R]."""
    r = _operator_of(state)
    n_max = (r.shape[0] - 1) // 2
    h = standard_operator("H", n_max, model=model).entries
    return ShiftedSincField.from_operator(-1j / model.hbar * (h @ r - r @ h))


def boundary_potential(psi2, psi1, theta, p, hbar=1.0):
    """Boundary difference of the Moyal integrand evaluated from the wave
    functions at v = +-pi."""
    theta = np.asarray(theta, dtype=float)
    pbar = np.asarray(p, dtype=float) / hbar

    def integrand(v):
        return (np.exp(-1j * pbar * v) * np.conj(evaluate(psi2, theta - v / 2))
                * evaluate(psi1, theta + v / 2))

    return (integrand(np.pi) - integrand(-np.pi)) / (2 * np.pi) ** 2


def _sin_profile(x):
    return np.sin(x)


def _x_sin_profile(x):
    return x * np.sin(x) / np.pi


def boundary_field(field):
    """b as a callable grid evaluator: b = -(i/pi) sum f_ks e^{ik theta} sin pi(pbar - s)."""
    def grid(theta, pbar, d_theta=0):
        f = field.d_theta(d_theta) if d_theta else field
        return -1j / np.pi * f.grid(theta, pbar, profile=_sin_profile)
    return grid


def liouville_boundary_prefactor(model):
    """Coefficient of d/dtheta b in the Liouville equation: i hbar / I."""
    return 1j * model.hbar / model.inertia


# ---------------------------------------------------------------------------
# residual reports
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    """Summary of LHS - RHS on an interior grid."""

    grid: dict
    max_abs: float
    mean_abs: float
    term_norms: dict
    n_series: int | None = None
    times: list = field(default_factory=list)
    per_time: list = field(default_factory=list)

    def to_json(self):
        doc = {"grid": self.grid, "max_abs": self.max_abs, "mean_abs": self.mean_abs,
               "term_norms": self.term_norms, "n_series": self.n_series}
        if self.times:
            doc["times"] = self.times
            doc["per_time_max_abs"] = self.per_time
        return json.dumps(doc, sort_keys=True)


def _interior_theta(theta):
    theta = np.asarray(theta, dtype=float)
    keep = np.abs(np.abs(theta) - np.pi) > 1e-12
    return theta[keep]


def _grid_axes(grid):
    if grid is None:
        grid = PhaseSpaceGrid()
    return grid, _interior_theta(grid.theta), grid.pbar


def _mode_derivative(k, a, b, theta):
    return k * (-a * np.sin(k * theta) + b * np.cos(k * theta))


def _mode_value(k, a, b, theta):
    return a * np.cos(k * theta) + b * np.sin(k * theta)


def liouville_terms(state, model, theta, pbar, n_series=None, boundary_prefactor=None):
    """Individual terms of the Liouville equation on the tensor grid.

    Returns a dict of arrays of shape (len(theta), len(pbar)):

    ``dt``
        dV/dt from the Schrodinger/von Neumann flow.
    ``transport``
        (p/I) dV/dtheta.
    ``potential_classical``
        sum_k U_k' dV/dp.
    ``potential_quantum``
        Shift form minus the classical part, or with ``n_series`` the odd
        derivative series truncated after n_series terms.
    ``boundary``
        prefactor * d/dtheta b.

    The residual is dt + transport - potential_classical - potential_quantum - boundary.
    """
    hbar = model.hbar
    theta = np.asarray(theta, dtype=float)
    pbar = np.asarray(pbar, dtype=float)
    f = wigner_field(state)
    fdot = time_derivative_field(state, model)
    prefactor = liouville_boundary_prefactor(model) if boundary_prefactor is None else boundary_prefactor
    terms = {"dt": fdot.grid(theta, pbar)}
    terms["transport"] = (hbar / model.inertia) * pbar[None, :] * f.d_theta().grid(theta, pbar)
    dvdp = f.grid(theta, pbar, p_order=1) / hbar
    classical = np.zeros_like(terms["dt"])
    quantum = np.zeros_like(terms["dt"])
    for k, a, b in model.potential_modes():
        if k == 0:
            continue
        du = _mode_derivative(k, a, b, theta)[:, None]
        classical += du * dvdp
        if n_series is None:
            shifted = (f.shift(k).grid(theta, pbar) - f.shift(-k).grid(theta, pbar)) / (k * hbar)
            quantum += du * shifted - du * dvdp
        else:
            for n in range(1, n_series + 1):
                c = (0.5 * k) ** (2 * n) / (hbar * factorial(2 * n + 1))
                quantum += du * c * f.grid(theta, pbar, p_order=2 * n + 1)
    terms["potential_classical"] = classical
    terms["potential_quantum"] = quantum
    terms["boundary"] = prefactor * boundary_field(f)(theta, pbar, d_theta=1)
    return terms


def _liouville_residual_grid(terms):
    return (terms["dt"] + terms["transport"] - terms["potential_classical"]
            - terms["potential_quantum"] - terms["boundary"])


def _as_sequence(states):
    if isinstance(states, (list, tuple)) and states and not (
            isinstance(states, tuple) and len(states) == 2 and isinstance(states[0], WaveFunction)):
        return list(states)
    return [states]


def liouville_residual(states, model, grid=None, n_series=None, times=None,
                       boundary_prefactor=None):
    """Max and mean |LHS - RHS| of the Liouville equation over an interior
    grid (theta = +-pi excluded), for one state or a trajectory.

    Parameters
    ----------
    states : WaveFunction, (psi2, psi1), MoyalCoefficients or a list of them
    model : PendulumModel
    grid : PhaseSpaceGrid, optional
    n_series : int, optional
        Use the truncated derivative series instead of the exact shifts.
    """
    grid, theta, pbar = _grid_axes(grid)
    seq = _as_sequence(states)
    norms, per_time, total, count = {}, [], 0.0, 0
    worst = 0.0
    for s in seq:
        terms = liouville_terms(s, model, theta, pbar, n_series, boundary_prefactor)
        res = np.abs(_liouville_residual_grid(terms))
        for name, values in terms.items():
            norms[name] = max(norms.get(name, 0.0), float(np.abs(values).max()))
        per_time.append(float(res.max()))
        worst = max(worst, float(res.max()))
        total += float(res.sum())
        count += res.size
    return ResidualReport(grid.describe(), worst, total / count, norms, n_series,
                          [] if times is None else [float(t) for t in times],
                          per_time if times is not None else [])


def calibrate_liouville_boundary(model, m=0, n=1, grid=None):
    """Least-squares constant c making dV/dt + (p/I) dV/dtheta = c d/dtheta b
    exact for the free-rotor state (e_m + e_n)/sqrt 2, where every term is
    closed form.  Returns (c, relative misfit)."""
    free = PendulumModel(inertia=model.inertia, hbar=model.hbar)
    n_max = max(abs(m), abs(n)) + 1
    psi = WaveFunction.from_modes({m: 1.0, n: 1.0}, n_max)
    grid, theta, pbar = _grid_axes(grid)
    terms = liouville_terms(psi, free, theta, pbar, boundary_prefactor=1.0)
    target = (terms["dt"] + terms["transport"]).ravel()
    basis = terms["boundary"].ravel()
    c = np.vdot(basis, target) / np.vdot(basis, basis)
    misfit = np.abs(target - c * basis).max() / max(np.abs(target).max(), 1e-300)
    return complex(c), float(misfit)


def diagonal_density_rhs(rho, model, theta, pbar):
    """Shift form of dV/dt for a theta-independent (diagonal) density under
    the pendulum: (A/hbar) sin(theta) [V(pbar + 1/2) - V(pbar - 1/2)], summed
    over all potential modes in general."""
    f = wigner_field(rho)
    out = 0.0
    for k, a, b in model.potential_modes():
        if k == 0:
            continue
        du = _mode_derivative(k, a, b, np.asarray(theta, dtype=float))[:, None]
        out = out + du * (f.shift(k).grid(theta, pbar) - f.shift(-k).grid(theta, pbar)) / (k * model.hbar)
    return out


def quantum_side_diagonal(field_fn, model, theta, p, dp=None):
    """Quantum part of the diagonal-density equation for a momentum profile
    held fixed as a function of p:

        sum_k U_k'(theta) ([V(p + k hbar/2) - V(p - k hbar/2)] / (k hbar) - dV/dp).

    ``field_fn(p)`` evaluates V and ``dp(p)`` its p-derivative.
    """
    hbar = model.hbar
    theta = np.asarray(theta, dtype=float)[:, None]
    p = np.asarray(p, dtype=float)[None, :]
    out = 0.0
    for k, a, b in model.potential_modes():
        if k == 0:
            continue
        du = _mode_derivative(k, a, b, theta)
        diff = (field_fn(p + 0.5 * k * hbar) - field_fn(p - 0.5 * k * hbar)) / (k * hbar)
        out = out + du * (diff - dp(p))
    return out


# ---------------------------------------------------------------------------
# energy equation
# ---------------------------------------------------------------------------

def _eigen_energy(psi, h, tol):
    c = psi.coeffs
    e = float(np.real(np.vdot(c, h @ c)))
    resid = float(np.linalg.norm(h @ c - e * c))
    if resid > tol:
        raise PreconditionError(f"state is not an eigenstate (||Hu - Eu|| = {resid:.2e})")
    return e


def energy_terms(psi2, psi1, model, theta, pbar, n_series=None, boundary_prefactor=None):
    """Terms of the stationary energy equation for the Moyal function V_{psi2 psi1}.

    ``kinetic``
        p^2/(2I) V - hbar^2/(8I) d^2V/dtheta^2.
    ``potential``
        sum_k U_k(theta) [V(p + k hbar/2) + V(p - k hbar/2)] / 2 (k = 0 included),
        or the even-derivative series when ``n_series`` is given.
    ``boundary``
        prefactor * sum f_ks e^{ik theta} (pbar + s) sin pi(pbar - s), the
        boundary flow built from rho_21 and j_21; the derived prefactor is
        -gamma hbar^2 / pi.

    The sum of the three equals (E1 + E2)/2 V.
    """
    g, hbar = model.gamma, model.hbar
    theta = np.asarray(theta, dtype=float)
    pbar = np.asarray(pbar, dtype=float)
    f = wigner_field((psi2, psi1))
    base = f.grid(theta, pbar)
    terms = {"kinetic": g * hbar ** 2 * pbar[None, :] ** 2 * base
             - 0.25 * g * hbar ** 2 * f.d_theta(2).grid(theta, pbar)}
    pot = np.zeros_like(base)
    for k, a, b in model.potential_modes():
        u = _mode_value(k, a, b, theta)[:, None]
        if k == 0:
            pot += u * base
        elif n_series is None:
            pot += u * 0.5 * (f.shift(k).grid(theta, pbar) + f.shift(-k).grid(theta, pbar))
        else:
            acc = base.copy()
            for n in range(1, n_series + 1):
                acc += (0.5 * k) ** (2 * n) / factorial(2 * n) * f.grid(theta, pbar, p_order=2 * n)
            pot += u * acc
    terms["potential"] = pot
    prefactor = -g * hbar ** 2 / np.pi if boundary_prefactor is None else boundary_prefactor
    # (pbar + s) sin x = 2 pbar sin x - (x / pi) sin x  with x = pi (pbar - s)
    flow = (2 * pbar[None, :] * f.grid(theta, pbar, profile=_sin_profile)
            - f.grid(theta, pbar, profile=_x_sin_profile))
    terms["boundary"] = prefactor * flow
    terms["value"] = base
    return terms


def energy_residual(u1, model, u2=None, grid=None, n_series=None, eigen_tol=1e-8,
                    boundary_prefactor=None):
    """Max and mean |LHS - (E1 + E2)/2 V| of the energy equation for an
    eigenstate (u2 omitted) or a Moyal pair of eigenstates (u2, u1).

    Raises
    ------
    PreconditionError
        If an input is not an eigenvector of the truncated Hamiltonian.
    """
    u2 = u1 if u2 is None else u2
    h = standard_operator("H", u1.n_max, model=model).entries
    e1, e2 = _eigen_energy(u1, h, eigen_tol), _eigen_energy(u2, h, eigen_tol)
    grid, theta, pbar = _grid_axes(grid)
    terms = energy_terms(u2, u1, model, theta, pbar, n_series, boundary_prefactor)
    rhs = 0.5 * (e1 + e2) * terms["value"]
    res = np.abs(terms["kinetic"] + terms["potential"] + terms["boundary"] - rhs)
    norms = {name: float(np.abs(v).max()) for name, v in terms.items() if name != "value"}
    norms["rhs"] = float(np.abs(rhs).max())
    return ResidualReport(grid.describe(), float(res.max()), float(res.mean()), norms, n_series)


def calibrate_energy_boundary(model, m=1, grid=None):
    """Least-squares constant of the boundary flow term fixed by the free
    rotor eigenstate e_m.  Returns (c, relative misfit)."""
    free = PendulumModel(inertia=model.inertia, hbar=model.hbar)
    psi = WaveFunction.basis(m, abs(m) + 1)
    energy = free.gamma * (free.hbar * m) ** 2
    grid, theta, pbar = _grid_axes(grid)
    terms = energy_terms(psi, psi, free, theta, pbar, boundary_prefactor=1.0)
    target = (energy * terms["value"] - terms["kinetic"] - terms["potential"]).ravel()
    basis = terms["boundary"].ravel()
    c = np.vdot(basis, target) / np.vdot(basis, basis)
    misfit = np.abs(target - c * basis).max() / max(np.abs(target).max(), 1e-300)
    return complex(c), float(misfit)


# ---------------------------------------------------------------------------
# continuity of rho_21 and j_21
# ---------------------------------------------------------------------------

def continuity_residual(psi2, psi1, model, theta, vartheta, source=True):
    """|d rho_21/dt + d j_21/dtheta - S| on the given angles, where

        rho_21 = conj(psi2(theta - v/2)) psi1(theta + v/2),
        j_21   = hbar/(2iI) [conj(psi2) dpsi1/dtheta - dconj(psi2)/dtheta psi1],

    time derivatives come from the Schrodinger flow, and S is the potential
    source (1/(i hbar)) [U(theta + v/2) - U(theta - v/2)] rho_21 (set
    ``source=False`` for the bare equation, exact at v = 0 or for U = 0).
    """
    hbar, inertia = model.hbar, model.inertia
    h = standard_operator("H", psi1.n_max, model=model).entries
    c1, c2 = psi1.coeffs, psi2.coeffs
    dc1, dc2 = -1j / hbar * (h @ c1), -1j / hbar * (h @ c2)
    idx = psi1.indices
    theta = np.asarray(theta, dtype=float)
    v = np.asarray(vartheta, dtype=float)
    theta, v = np.broadcast_arrays(theta, v)
    a = np.exp(1j * np.multiply.outer(theta + v / 2, idx))   # e_n(theta + v/2)
    b = np.exp(1j * np.multiply.outer(theta - v / 2, idx))   # e_m(theta - v/2)
    f, g = np.conj(b @ c2), a @ c1
    d2f, d2g = np.conj(b @ (-(idx ** 2) * c2)), a @ (-(idx ** 2) * c1)
    rho_dot = np.conj(b @ dc2) * g + f * (a @ dc1)
    dj = hbar / (2j * inertia) * (f * d2g - d2f * g)
    res = rho_dot + dj
    if source:
        res = res - (model.potential(theta + v / 2) - model.potential(theta - v / 2)) * f * g / (1j * hbar)
    return np.abs(res)


# ---------------------------------------------------------------------------
# dumps
# ---------------------------------------------------------------------------

def trajectory_jsonl(times, states):
    """One JSON record per line: {"t": t, "coeffs": [[re, im], ...]}."""
    lines = []
    for t, s in zip(times, states):
        coeffs = [[float(z.real), float(z.imag)] for z in s.coeffs]
        lines.append(json.dumps({"t": float(t), "n_max": s.n_max, "coeffs": coeffs}))
    return "\n".join(lines) + "\n"
