"""Exact phase-space fields  F(theta, pbar) = sum f[k, s] e^{ik theta} sinc pi(pbar - s).

Every Wigner, Moyal or density-matrix phase-space function of a state on
the truncated window has this form with k integer and s half-integer, and
the family is closed under the half-integer momentum shifts that appear in
the potential terms of the dynamics.  Coefficients are kept in a dense
array indexed by ``k - k_min`` and ``2 s - s2_min``.
"""

from __future__ import annotations

import numpy as np

from .basis import sinc_deriv, sinc_eval

__all__ = ["ShiftedSincField"]


class ShiftedSincField:
    """Finite sum of e^{ik theta} sinc pi(pbar - s) terms.

    Parameters
    ----------
    coeffs : ndarray, shape (nk, ns)
        Coefficient of mode ``k_min + i`` and momentum offset
        ``(s2_min + j) / 2``.
    k_min, s2_min : int
    """

    def __init__(self, coeffs, k_min, s2_min):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.k_min = int(k_min)
        self.s2_min = int(s2_min)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_operator(cls, r):
        """Field of tr[R V(theta, p)] for a matrix R on the basis window
        (R = rho gives the density Wigner function, R = |c1><c2| the Moyal
        function V_{psi2 psi1})."""
        r = np.asarray(r, dtype=complex)
        n_max = (r.shape[0] - 1) // 2
        idx = np.arange(-n_max, n_max + 1)
        m, n = np.meshgrid(idx, idx, indexing="ij")
        coeffs = np.zeros((4 * n_max + 1, 4 * n_max + 1), dtype=complex)
        # term V_mn carries weight R_nm
        coeffs[(n - m) + 2 * n_max, (m + n) + 2 * n_max] = r.T / (2 * np.pi)
        return cls(coeffs, -2 * n_max, -2 * n_max)

    @classmethod
    def from_moyal(cls, psi2, psi1):
        return cls.from_operator(np.outer(psi1.coeffs, psi2.coeffs.conj()))

    @classmethod
    def from_wavefunction(cls, psi):
        return cls.from_moyal(psi, psi)

    @classmethod
    def from_terms(cls, terms):
        """From a mapping {(k, s): coefficient} with s a multiple of 1/2."""
        if not terms:
            return cls(np.zeros((1, 1)), 0, 0)
        ks = [int(k) for k, _ in terms]
        s2 = [int(round(2 * s)) for _, s in terms]
        for (_, s), t in zip(terms, s2):
            if abs(2 * s - t) > 1e-12:
                raise ValueError(f"momentum offset {s} is not a multiple of 1/2")
        coeffs = np.zeros((max(ks) - min(ks) + 1, max(s2) - min(s2) + 1), dtype=complex)
        for (k, t), value in zip(zip(ks, s2), terms.values()):
            coeffs[k - min(ks), t - min(s2)] += value
        return cls(coeffs, min(ks), min(s2))

    # -- bookkeeping --------------------------------------------------------

    @property
    def ks(self):
        return self.k_min + np.arange(self.coeffs.shape[0])

    @property
    def offsets(self):
        return 0.5 * (self.s2_min + np.arange(self.coeffs.shape[1]))

    def terms(self, tol=0.0):
        out = {}
        for i, k in enumerate(self.ks):
            for j, s in enumerate(self.offsets):
                if abs(self.coeffs[i, j]) > tol:
                    out[(int(k), float(s))] = complex(self.coeffs[i, j])
        return out

    def _aligned(self, other):
        k0 = min(self.k_min, other.k_min)
        k1 = max(self.k_min + self.coeffs.shape[0], other.k_min + other.coeffs.shape[0])
        t0 = min(self.s2_min, other.s2_min)
        t1 = max(self.s2_min + self.coeffs.shape[1], other.s2_min + other.coeffs.shape[1])
        out = []
        for f in (self, other):
            c = np.zeros((k1 - k0, t1 - t0), dtype=complex)
            i, j = f.k_min - k0, f.s2_min - t0
            c[i:i + f.coeffs.shape[0], j:j + f.coeffs.shape[1]] = f.coeffs
            out.append(c)
        return out[0], out[1], k0, t0

    def __add__(self, other):
        a, b, k0, t0 = self._aligned(other)
        return ShiftedSincField(a + b, k0, t0)

    def __sub__(self, other):
        a, b, k0, t0 = self._aligned(other)
        return ShiftedSincField(a - b, k0, t0)

    def __mul__(self, scalar):
        return ShiftedSincField(scalar * self.coeffs, self.k_min, self.s2_min)

    __rmul__ = __mul__

    def allclose(self, other, atol=1e-12):
        a, b, _, _ = self._aligned(other)
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    # -- exact operations ---------------------------------------------------

    def shift(self, half_steps):
        """F(theta, pbar + half_steps / 2), exact on the half-integer lattice."""
        return ShiftedSincField(self.coeffs, self.k_min, self.s2_min - int(half_steps))

    def d_theta(self, order=1):
        factor = (1j * self.ks) ** order
        return ShiftedSincField(self.coeffs * factor[:, None], self.k_min, self.s2_min)

    def conj(self):
        return ShiftedSincField(self.coeffs[::-1].conj(), -(self.k_min + self.coeffs.shape[0] - 1),
                                self.s2_min)

    def is_real(self, atol=1e-14):
        return self.allclose(self.conj(), atol=atol)

    def integral(self):
        """int dtheta int dpbar F  (each sinc integrates to one)."""
        if not self.k_min <= 0 < self.k_min + self.coeffs.shape[0]:
            return 0j
        return complex(2 * np.pi * self.coeffs[-self.k_min].sum())

    def inner(self, other):
        """int dtheta int dpbar conj(F) G, using
        int dpbar sinc pi(pbar - s) sinc pi(pbar - s') = sinc pi(s - s')."""
        a, b, _, t0 = self._aligned(other)
        s = 0.5 * (t0 + np.arange(a.shape[1]))
        gram = sinc_eval(np.pi * np.subtract.outer(s, s))
        return complex(2 * np.pi * np.einsum("ks,st,kt->", a.conj(), gram, b))

    def theta_marginal(self, theta):
        """int dpbar F(theta, pbar)."""
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.ks)) @ self.coeffs.sum(axis=1)

    def momentum_marginal(self, pbar):
        """int dtheta F(theta, pbar)."""
        pbar = np.asarray(pbar, dtype=float)
        if not self.k_min <= 0 < self.k_min + self.coeffs.shape[0]:
            return np.zeros(pbar.shape, dtype=complex)
        row = self.coeffs[-self.k_min]
        return 2 * np.pi * sinc_eval(np.pi * np.subtract.outer(pbar, self.offsets)) @ row

    # -- evaluation ---------------------------------------------------------

    def _momentum_part(self, pbar, p_order, profile):
        x = np.pi * np.subtract.outer(np.asarray(pbar, dtype=float), self.offsets)
        if profile is not None:
            prof = profile(x)
        elif p_order == 0:
            prof = sinc_eval(x)
        else:
            prof = np.pi ** p_order * sinc_deriv(x, p_order)
        return prof @ self.coeffs.T

    def grid(self, theta, pbar, p_order=0, profile=None):
        """Values on the tensor grid, shape (len(theta), len(pbar)).

        ``p_order`` differentiates with respect to pbar; ``profile``
        replaces sinc by another function of x = pi (pbar - s).
        """
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        g = self._momentum_part(np.atleast_1d(pbar), p_order, profile)
        return np.exp(1j * np.multiply.outer(theta, self.ks)) @ g.T

    def __call__(self, theta, pbar, p_order=0, profile=None):
        theta, pbar = np.broadcast_arrays(np.asarray(theta, dtype=float),
                                          np.asarray(pbar, dtype=float))
        shape = theta.shape
        g = self._momentum_part(pbar.ravel(), p_order, profile)
        e = np.exp(1j * np.multiply.outer(theta.ravel(), self.ks))
        out = np.sum(e * g, axis=1).reshape(shape)
        return out[()] if out.ndim == 0 else out
