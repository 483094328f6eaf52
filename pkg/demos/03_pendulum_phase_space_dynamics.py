"""Phase-space dynamics of the quantum pendulum.

The Hilbert-space solution (eigendecomposition of the truncated Hamiltonian)
is the oracle.  Its Wigner function satisfies a Liouville-type equation whose
potential term is a finite difference in momentum rather than a derivative,
plus a boundary term from the periodicity of the angle.

Run:  python demos/03_pendulum_phase_space_dynamics.py
"""

import numpy as np

from cylwig import (PendulumModel, PhaseSpaceGrid, WaveFunction, eigensystem, energy_residual,
                    evolve_schrodinger, liouville_residual, thermal_state)
from cylwig.dynamics import liouville_terms

model = PendulumModel.from_gamma(0.5, amplitude=1.0)
eig = eigensystem(model, 32)
print("lowest pendulum levels:", np.round(eig.energies[:6], 6))

psi0 = WaveFunction.gaussian(32, center=0.0, width=1.5, angle=0.0)
times = np.linspace(0.0, 1.0, 5)
traj = evolve_schrodinger(psi0, times, model, eig)
grid = PhaseSpaceGrid(n_theta=64, pbar_min=-4, pbar_max=4, n_pbar=161)

report = liouville_residual(traj, model, grid, times=times)
print(f"\nLiouville residual, exact shifts: {report.max_abs:.2e}")
for name, size in sorted(report.term_norms.items()):
    print(f"  |{name}| <= {size:.3f}")

# Replacing the shifts by their derivative series converges fast.
for n_series in (1, 2, 4, 6):
    r = liouville_residual(traj[0], model, grid, n_series=n_series).max_abs
    print(f"  series with {n_series} terms: residual {r:.2e}")

# Dropping the boundary term breaks the equation.
broken = liouville_residual(traj[0], model, grid, boundary_prefactor=0.0).max_abs
print(f"without the boundary term: {broken:.2e}")

# Stationary states satisfy an energy equation in phase space.
for j in range(4):
    print(f"energy equation, level {j}: residual {energy_residual(eig.state(j), model, grid=grid).max_abs:.2e}")

# Thermal states are diagonal in the eigenbasis and normalized in phase space.
rho = thermal_state(model, beta=2.0, n_max=32)
terms = liouville_terms(rho, model, grid.theta[1:], grid.pbar)
print(f"\nthermal state: |dV/dt| <= {np.abs(terms['dt']).max():.2e} (stationary)")
print(f"thermal state: int V = {rho.field().integral().real:.15f}")
