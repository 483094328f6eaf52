"""Wigner and Moyal functions on the cylinder S^1 x R.

The kernel matrix is

    V_mn(theta, p) = (1/2pi) e^{i(n-m) theta} sinc pi(p/hbar - (m+n)/2),

and V_{psi2 psi1}(theta, p) = sum_mn conj(c2_m) V_mn c1_n.  Phase-space
integrals use d(pbar) = d(p/hbar) with theta in [-pi, pi).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .basis import WaveFunction, evaluate, sinc_eval
from .field import ShiftedSincField
from .quadrature import pbar_quad, theta_grid, theta_integrate

__all__ = [
    "DegenerateAnchorError",
    "MoyalCoefficients",
    "PhaseSpaceGrid",
    "kernel",
    "kernel_matrix",
    "moyal_eval",
    "moyal_eval_quadrature",
    "wigner_eval",
    "wigner_from_density",
    "marginals",
    "momentum_filter",
    "overlap",
    "overlap_quadrature",
    "purity",
    "recover_wavefunction",
    "kernel_orthogonality",
    "kernel_orthogonality_quadrature",
    "trace_product",
    "write_grid_csv",
    "grid_to_json",
]


class DegenerateAnchorError(ValueError):
    """The wave function vanishes at the phase anchor phi = 0."""


@dataclass(frozen=True, eq=False)
class MoyalCoefficients:
    """Bilinear state data behind a phase-space function.

    ``rho`` is the operator R with V(theta, p) = tr[R V(theta, p)]: a density
    matrix, or R = |c1><c2| for the Moyal pair (psi2, psi1).  ``matrix``
    gives M_mn = conj(c2_m) c1_n = R_nm.
    """

    n_max: int
    rho: np.ndarray
    is_density: bool = True
    tol: float = 1e-10

    def __post_init__(self):
        r = np.array(self.rho, dtype=complex)
        dim = 2 * self.n_max + 1
        if r.shape != (dim, dim):
            raise ValueError(f"rho must have shape {(dim, dim)}, got {r.shape}")
        if self.is_density:
            if abs(np.trace(r) - 1) > self.tol:
                raise ValueError(f"density matrix trace {np.trace(r).real:.3g} != 1")
            if not np.allclose(r, r.conj().T, rtol=0, atol=self.tol):
                raise ValueError("density matrix is not hermitian")
        r.setflags(write=False)
        object.__setattr__(self, "rho", r)

    @classmethod
    def pure(cls, psi):
        return cls(psi.n_max, np.outer(psi.coeffs, psi.coeffs.conj()))

    @classmethod
    def pair(cls, psi2, psi1):
        if psi2.n_max != psi1.n_max:
            n = max(psi2.n_max, psi1.n_max)
            psi2, psi1 = psi2.padded(n), psi1.padded(n)
        return cls(psi1.n_max, np.outer(psi1.coeffs, psi2.coeffs.conj()), is_density=False)

    @classmethod
    def diagonal(cls, weights, n_max):
        """rho_mn = lambda_m delta_mn from a mapping {m: lambda_m} or a full vector."""
        lam = np.zeros(2 * n_max + 1)
        if isinstance(weights, dict):
            for m, w in weights.items():
                lam[m + n_max] = w
        else:
            lam[:] = weights
        return cls(n_max, np.diag(lam))

    @classmethod
    def mixture(cls, weights, states):
        n = max(s.n_max for s in states)
        r = sum(w * np.outer(s.padded(n).coeffs, s.padded(n).coeffs.conj())
                for w, s in zip(weights, states))
        return cls(n, r)

    @property
    def matrix(self):
        return self.rho.T

    def trace(self):
        return complex(np.trace(self.rho))

    def is_positive(self, atol=1e-12):
        if not self.is_density:
            return False
        return bool(np.linalg.eigvalsh(self.rho).min() >= -atol)

    def field(self):
        return ShiftedSincField.from_operator(self.rho)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform theta on [-pi, pi) times uniform pbar on [pbar_min, pbar_max]."""

    n_theta: int = 64
    pbar_min: float = -4.0
    pbar_max: float = 4.0
    n_pbar: int = 161

    def __post_init__(self):
        if self.n_theta < 1 or self.n_pbar < 1:
            raise ValueError("grid sizes must be positive")
        if self.n_pbar > 1 and not self.pbar_max > self.pbar_min:
            raise ValueError("pbar_max must exceed pbar_min")

    @classmethod
    def parse(cls, text):
        """From a spec like ``t=64,p=-4:4:161``."""
        out = {}
        for part in text.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "t":
                out["n_theta"] = int(value)
            elif key == "p":
                lo, hi, num = value.split(":")
                out.update(pbar_min=float(lo), pbar_max=float(hi), n_pbar=int(num))
            else:
                raise ValueError(f"unknown grid key {key!r} in {text!r}")
        return cls(**out)

    @property
    def theta(self):
        return theta_grid(self.n_theta)

    @property
    def pbar(self):
        return np.linspace(self.pbar_min, self.pbar_max, self.n_pbar)

    def mesh(self):
        return np.meshgrid(self.theta, self.pbar, indexing="ij")

    def describe(self):
        return {"n_theta": self.n_theta, "pbar_min": self.pbar_min,
                "pbar_max": self.pbar_max, "n_pbar": self.n_pbar}


def kernel(m, n, theta, p, hbar=1.0):
    """Matrix element V_mn(theta, p)."""
    theta = np.asarray(theta, dtype=float)
    pbar = np.asarray(p, dtype=float) / hbar
    return np.exp(1j * (n - m) * theta) * sinc_eval(np.pi * (pbar - 0.5 * (m + n))) / (2 * np.pi)


def kernel_matrix(theta, p, n_max, hbar=1.0):
    """The full matrix V(theta, p) on the window, indexed [m, n]."""
    idx = np.arange(-n_max, n_max + 1)
    m, n = np.meshgrid(idx, idx, indexing="ij")
    return kernel(m, n, theta, p, hbar)


_CHUNK = 512


def moyal_eval(psi2, psi1, theta, p, hbar=1.0):
    """Moyal function V_{psi2 psi1}(theta, p) by the double sum over the kernel."""
    if psi2.n_max != psi1.n_max:
        n = max(psi2.n_max, psi1.n_max)
        psi2, psi1 = psi2.padded(n), psi1.padded(n)
    theta, p = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(p, dtype=float))
    shape = theta.shape
    th, pb = theta.ravel(), p.ravel() / hbar
    idx = psi1.indices
    weights = np.outer(psi2.coeffs.conj(), psi1.coeffs)
    half_sum = 0.5 * np.add.outer(idx, idx)
    diff = np.subtract.outer(idx, idx)  # m - n
    out = np.empty(th.size, dtype=complex)
    for lo in range(0, th.size, _CHUNK):
        t = th[lo:lo + _CHUNK, None, None]
        x = np.pi * (pb[lo:lo + _CHUNK, None, None] - half_sum)
        terms = weights * np.exp(-1j * diff * t) * sinc_eval(x)
        out[lo:lo + _CHUNK] = terms.sum(axis=(1, 2)) / (2 * np.pi)
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def wigner_eval(psi, theta, p, hbar=1.0):
    """Wigner function V_psi(theta, p); real."""
    return np.real(moyal_eval(psi, psi, theta, p, hbar))


def moyal_eval_quadrature(psi2, psi1, theta, p, hbar=1.0, nodes=None):
    """Independent route: Gauss-Legendre quadrature of the defining integral

        (1/2pi) int_{-pi}^{pi} dv/(2pi) e^{-i p v / hbar} conj(psi2(theta - v/2)) psi1(theta + v/2).
    """
    if nodes is None:
        nodes = 4 * max(psi1.n_max, psi2.n_max) + 64
    x, w = np.polynomial.legendre.leggauss(nodes)
    v, w = np.pi * x, np.pi * w
    theta, p = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(p, dtype=float))
    shape = theta.shape
    th, pb = theta.ravel()[:, None], p.ravel()[:, None] / hbar
    integrand = (np.exp(-1j * pb * v) * np.conj(evaluate(psi2, th - v / 2))
                 * evaluate(psi1, th + v / 2))
    out = (integrand @ w / (2 * np.pi) ** 2).reshape(shape)
    return out[()] if out.ndim == 0 else out


def _as_density(rho):
    if isinstance(rho, MoyalCoefficients):
        return rho
    return MoyalCoefficients((np.asarray(rho).shape[0] - 1) // 2, rho)


def wigner_from_density(rho, theta, p, hbar=1.0):
    """V_rho(theta, p) = tr[rho V(theta, p)] for a density matrix."""
    rho = _as_density(rho)
    if not rho.is_density:
        raise ValueError("expected a density matrix")
    field = rho.field()
    return np.real(field(theta, np.asarray(p, dtype=float) / hbar))


def marginals(psi, hbar=1.0):
    """Angle and momentum marginals of the Wigner function.

    Returns
    -------
    theta_marginal : callable
        theta -> int dpbar V_psi = |psi(theta)|^2 / 2pi.
    omega : callable
        p -> int dtheta V_psi = sum_n |c_n|^2 sinc pi(p/hbar - n).
    """
    prob = np.abs(psi.coeffs) ** 2
    idx = psi.indices

    def theta_marginal(theta):
        return np.abs(evaluate(psi, theta)) ** 2 / (2 * np.pi)

    def omega(p):
        x = np.pi * np.subtract.outer(np.asarray(p, dtype=float) / hbar, idx)
        return sinc_eval(x) @ prob

    return theta_marginal, omega


def _moyal_omega(psi2, psi1):
    w = psi2.coeffs.conj() * psi1.coeffs
    idx = psi1.indices
    return lambda pbar: sinc_eval(np.pi * np.subtract.outer(pbar, idx)) @ w


def momentum_filter(psi2, psi1, m, window=60.0):
    """conj(c2_m) c1_m recovered by integrating the theta-integrated Moyal
    function against sinc pi(m - pbar) over the whole pbar axis."""
    if psi2.n_max != psi1.n_max:
        n = max(psi2.n_max, psi1.n_max)
        psi2, psi1 = psi2.padded(n), psi1.padded(n)
    omega = _moyal_omega(psi2, psi1)
    return complex(pbar_quad(lambda x: sinc_eval(np.pi * (m - x)) * omega(x), window=window))


def _field_of(state):
    if isinstance(state, WaveFunction):
        return ShiftedSincField.from_wavefunction(state)
    if isinstance(state, MoyalCoefficients):
        return state.field()
    if isinstance(state, ShiftedSincField):
        return state
    raise TypeError(f"cannot build a phase-space field from {type(state).__name__}")


def overlap(psi2, psi1):
    """Transition probability 2pi int int V_psi2 V_psi1, evaluated exactly in
    coefficient space; equals |(psi2, psi1)|^2 for pure states."""
    f2, f1 = _field_of(psi2), _field_of(psi1)
    return float(np.real(2 * np.pi * f2.inner(f1)))


def purity(state):
    """int int V^2: 1/2pi for pure states, tr(rho^2)/2pi for densities."""
    f = _field_of(state)
    return float(np.real(f.inner(f)))


def overlap_quadrature(psi2, psi1, window=60.0, n_theta=None):
    """Cross-check of ``overlap`` by explicit phase-space quadrature."""
    n = max(psi2.n_max, psi1.n_max)
    theta = theta_grid(n_theta or 8 * n + 8)

    def integrand(x):
        t, pb = np.meshgrid(theta, x, indexing="ij")
        prod = wigner_eval(psi2, t, pb) * wigner_eval(psi1, t, pb)
        return theta_integrate(prod, axis=0)

    return float(np.real(2 * np.pi * pbar_quad(integrand, window=window)))


def trace_product(a, b, method="exact", window=40.0):
    """2pi int int tr[A V] tr[B V], which equals tr(A B)."""
    fa, fb = ShiftedSincField.from_operator(a.entries), ShiftedSincField.from_operator(b.entries)
    if method == "exact":
        return 2 * np.pi * fa.conj().inner(fb)
    theta = theta_grid(4 * a.n_max + 8)

    def integrand(x):
        return theta_integrate(fa.grid(theta, x) * fb.grid(theta, x), axis=0)

    return complex(2 * np.pi * pbar_quad(integrand, window=window))


def recover_wavefunction(wigner, n_max, hbar=1.0, n_theta=None, anchor_threshold=1e-3,
                         window=60.0):
    """Rebuild psi (up to a global phase) from its Wigner function via

        conj(psi(0)) psi(theta) = 2pi int dpbar e^{i pbar theta} V_psi(theta/2, p).

    Parameters
    ----------
    wigner : callable
        (theta, p) -> V_psi(theta, p), vectorized.
    n_max : int
        Basis window of the reconstruction.
    anchor_threshold : float
        Minimum |psi(0)| accepted as phase anchor.

    Raises
    ------
    DegenerateAnchorError
        If |psi(0)| is below ``anchor_threshold``.
    """
    k = n_theta or 4 * n_max + 8
    # midpoints avoid theta = +-pi, where the pbar integral only sees half the jump
    theta = -np.pi + (np.arange(k) + 0.5) * 2 * np.pi / k

    def product_at(t):
        f = lambda x: np.real(wigner(np.full_like(x, t / 2), hbar * x))
        return 2 * np.pi * pbar_quad(f, window=window, weight_freq=t)

    anchor = np.real(product_at(0.0))
    if anchor < anchor_threshold ** 2:
        raise DegenerateAnchorError(
            f"|psi(0)|^2 = {anchor:.3g}: the wave function vanishes at the phase anchor")
    values = np.array([product_at(t) for t in theta]) / np.sqrt(anchor)
    idx = np.arange(-n_max, n_max + 1)
    coeffs = np.exp(-1j * np.outer(idx, theta)) @ values / k
    psi = WaveFunction(n_max, coeffs).normalized()
    # global phase: psi(0) real positive
    phase = evaluate(psi, 0.0)
    return WaveFunction(n_max, psi.coeffs * abs(phase) / phase)


def kernel_orthogonality(k, l, m, n):
    """2pi int dtheta int dpbar V_kl V_mn in closed form.

    The theta integral is Fourier orthogonality; the pbar integral of two
    shifted sincs equals sinc pi(s - s').  The result is delta_kn delta_lm.
    """
    if (l - k) + (n - m) != 0:
        return 0.0
    # 2pi * (1/2pi)^2 * 2pi * sinc pi((k+l)/2 - (m+n)/2); the offset is an integer here
    offset = ((k + l) - (m + n)) // 2
    return 1.0 if offset == 0 else 0.0


def kernel_orthogonality_quadrature(k, l, m, n, window=60.0):
    theta = theta_grid(4 * max(abs(k), abs(l), abs(m), abs(n)) + 8)

    def integrand(x):
        t, pb = np.meshgrid(theta, x, indexing="ij")
        return theta_integrate(kernel(k, l, t, pb) * kernel(m, n, t, pb), axis=0)

    return float(np.real(2 * np.pi * pbar_quad(integrand, window=window)))


# ---------------------------------------------------------------------------
# grid dumps
# ---------------------------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def write_grid_csv(theta, pbar, values, stream=None):
    """CSV with columns theta,pbar,value (real data) or
    theta,pbar,value_re,value_im (complex data); theta varies slowest."""
    values = np.asarray(values)
    real = not np.iscomplexobj(values)
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["theta", "pbar", "value"] if real else
                    ["theta", "pbar", "value_re", "value_im"])
    for i, t in enumerate(theta):
        for j, pb in enumerate(pbar):
            z = values[i, j]
            row = [_fmt(t), _fmt(pb)]
            row += [_fmt(z)] if real else [_fmt(z.real), _fmt(z.imag)]
            writer.writerow(row)
    return out.getvalue() if stream is None else None


def grid_to_json(theta, pbar, values):
    values = np.asarray(values)
    doc = {"theta": [float(t) for t in theta], "pbar": [float(x) for x in pbar]}
    if np.iscomplexobj(values):
        doc["value_re"] = values.real.tolist()
        doc["value_im"] = values.imag.tolist()
    else:
        doc["value"] = values.tolist()
    return json.dumps(doc)
