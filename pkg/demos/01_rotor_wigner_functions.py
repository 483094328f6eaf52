"""Wigner functions of a planar rotor.

A rotor state is a Fourier series in the angle.  Its Wigner function lives on
the cylinder (angle x angular momentum) and is a finite sum of shifted sincs,
so everything below is evaluated in closed form.

Run:  python demos/01_rotor_wigner_functions.py
"""

import numpy as np

from cylwig import (ShiftedSincField, WaveFunction, inner_product, marginals, overlap, purity,
                    recover_wavefunction, wigner_eval)

# A single angular-momentum eigenstate is uniform in angle.  In momentum it is
# a sinc centred on its quantum number, not a delta: the continuous momentum
# axis interpolates the integer lattice.
e2 = WaveFunction.basis(2, 6)
pbar = np.array([1.0, 1.5, 2.0, 2.5, 3.0])
print("V_e2(theta=0.3, pbar) =", np.round(wigner_eval(e2, 0.3, pbar), 5))
print("  at integers only pbar = 2 survives; half-integers carry the sinc sidelobes\n")

# A localized wave packet: Gaussian weights in angular momentum around 1.5,
# centred at angle 0.8.
psi = WaveFunction.gaussian(12, center=1.5, width=2.0, angle=0.8)
field = ShiftedSincField.from_wavefunction(psi)
print(f"normalization  int V   = {field.integral().real:.15f}")
print(f"purity         int V^2 = {purity(psi):.15f}   (1/2pi = {1 / (2 * np.pi):.15f})")

# Negativity is the usual non-classicality witness; a superposition of
# opposite angular momenta shows interference fringes between them.
theta = np.linspace(-np.pi, np.pi, 181)
cat = ShiftedSincField.from_wavefunction(WaveFunction.from_modes({-3: 1.0, 3: 1.0}, 6))
fringes = cat.grid(theta, np.linspace(-6, 6, 241)).real
print(f"cat state: most negative value {fringes.min():.4f}, at pbar = 0 the value oscillates"
      f" as cos(6 theta)\n")

# Marginals: integrating over momentum gives the angular density.
theta_marginal, omega = marginals(psi)
print("angle marginal vs |psi|^2/2pi:",
      np.allclose(theta_marginal(theta), np.abs(psi(theta)) ** 2 / (2 * np.pi)))
print("omega at integers = |c_n|^2:  ",
      np.allclose(omega(np.arange(-12, 13.0)), np.abs(psi.coeffs) ** 2), "\n")

# Overlaps follow from a phase-space integral of two Wigner functions.
other = WaveFunction.gaussian(12, center=-0.5, width=1.5, angle=0.0)
print(f"2pi int V1 V2 = {overlap(psi, other):.12f}")
print(f"|<psi1,psi2>|^2 = {abs(inner_product(psi, other)) ** 2:.12f}\n")

# The Wigner function determines the state up to a global phase.
rec = recover_wavefunction(lambda t, p: wigner_eval(psi, t, p), 12)
print(f"reconstruction fidelity: {abs(inner_product(rec, psi)) ** 2:.14f}")
