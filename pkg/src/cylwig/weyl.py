"""Weyl correspondence between banded matrices and phase-space symbols.

Symbol of an operator:

    A~(theta, p) = 2pi tr[A V(theta, p)]
                 = sum_k e^{ik theta} sum_n A_{n+k,n} sinc pi(pbar - n - k/2),

so the k-th Fourier component sinc-interpolates the k-th band sampled at
the lattice pbar = n + k/2.  When A_{n+k,n} = P_k(hbar (n + k/2)) for
polynomials P_k the symbol is sum_k P_k(p) e^{ik theta}, and conversely the
inversion integral gives A_mn = P_{m-n}(hbar (m+n)/2) via the moment rule
int dpbar pbar^j sinc pi(pbar - s) = s^j.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from .basis import BandedOperator, TruncationWarning, sinc_eval
from .field import ShiftedSincField
from .kernel import kernel_matrix
from .quadrature import pbar_quad
from .symbols import PhaseSpaceSymbol

__all__ = [
    "SampledSymbol",
    "weyl_symbol",
    "weyl_quantize",
    "symbol_by_trace",
    "product_symbol_by_trace",
    "convolution_kernel",
    "convolve_with_symbol",
    "sinc_moment",
    "sinc_moment_regularized",
    "triple_trace",
]

_MAX_FIT_DEGREE = 12


class SampledSymbol:
    """Numeric symbol 2pi tr[A V(theta, p)] of a matrix whose bands are not
    polynomial in the lattice momentum; ``exact`` is False."""

    exact = False

    def __init__(self, operator, hbar=1.0, reason=""):
        self.operator = operator
        self.hbar = hbar
        self.reason = reason
        self.field = 2 * np.pi * ShiftedSincField.from_operator(operator.entries)

    def __call__(self, theta, p):
        return self.field(theta, np.asarray(p, dtype=float) / self.hbar)

    def grid(self, theta, p):
        return self.field.grid(theta, np.asarray(p, dtype=float) / self.hbar)


def _snap(values, max_den=4096):
    out = np.empty_like(values)
    for i, z in enumerate(values):
        re = Fraction(z.real).limit_denominator(max_den)
        im = Fraction(z.imag).limit_denominator(max_den)
        out[i] = complex(float(re), float(im))
    return out


def _fit_band(x, y, tol):
    """Lowest-degree polynomial through (x, y) within ``tol``; None if none."""
    scale = max(1.0, float(np.abs(y).max()))
    top = min(_MAX_FIT_DEGREE, max(0, x.size - 2))
    for deg in range(top + 1):
        if x.size == 1 or deg == 0:
            coef = np.array([y.mean()])
        else:
            re = Polynomial.fit(x, y.real, deg).convert().coef
            im = Polynomial.fit(x, y.imag, deg).convert().coef
            coef = np.zeros(deg + 1, dtype=complex)
            coef[: re.size] += re
            coef[: im.size] += 1j * im
        resid = np.abs(np.polynomial.polynomial.polyval(x, coef) - y).max()
        if resid <= tol * scale:
            snapped = _snap(coef)
            if np.array_equal(np.polynomial.polynomial.polyval(x, snapped), y):
                return snapped
            snap_resid = np.abs(np.polynomial.polynomial.polyval(x, snapped) - y).max()
            return snapped if snap_resid <= resid else coef
    return None


def weyl_symbol(a, hbar=1.0, tol=1e-10):
    """Symbol 2pi tr[A V(theta, p)] of a banded matrix.

    Each band k is fitted, on the trusted interior of the window, by the
    lowest-degree polynomial P_k in x = hbar (n + k/2); coefficients are
    snapped to nearby rationals when that reproduces the entries exactly.

    Returns
    -------
    PhaseSpaceSymbol
        When every band is polynomial within ``tol`` (relative).
    SampledSymbol
        Otherwise, flagged non-exact.
    """
    terms = {}
    t = a.trusted
    for k in range(-a.bandwidth, a.bandwidth + 1):
        n, vals = a.band(k)
        inside = (np.abs(n) <= t) & (np.abs(n + k) <= t)
        n, vals = n[inside], vals[inside]
        if n.size == 0 or not np.any(vals != 0):
            continue
        coef = _fit_band(hbar * (n + 0.5 * k), vals, tol)
        if coef is None:
            return SampledSymbol(a, hbar, reason=f"band {k} is not polynomial in the lattice momentum")
        terms[k] = coef
    return PhaseSpaceSymbol(terms)


def weyl_quantize(sym, n_max, hbar=1.0):
    """Matrix A_mn = P_{m-n}(hbar (m+n)/2) of a polynomial symbol."""
    idx = np.arange(-n_max, n_max + 1)
    m, n = np.meshgrid(idx, idx, indexing="ij")
    a = np.zeros((2 * n_max + 1, 2 * n_max + 1), dtype=complex)
    dropped = []
    for k in sym.modes():
        if abs(k) > 2 * n_max:
            dropped.append(k)
            continue
        mask = (m - n) == k
        a[mask] = np.polynomial.polynomial.polyval(0.5 * hbar * (m[mask] + n[mask]), sym.poly(k))
    if dropped:
        warnings.warn(f"modes {dropped} do not fit into the window n_max={n_max}",
                      TruncationWarning, stacklevel=2)
    herm = sym.is_hermitian() and np.array_equal(a, a.conj().T)
    return BandedOperator(n_max, a, hermitian=herm)


def symbol_by_trace(a, theta, p, hbar=1.0):
    """2pi tr[A V(theta, p)] summed directly from kernel matrices."""
    theta, p = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(p, dtype=float))
    out = np.array([2 * np.pi * np.trace(a.entries @ kernel_matrix(t, q, a.n_max, hbar))
                    for t, q in zip(theta.ravel(), p.ravel())]).reshape(theta.shape)
    return out[()] if out.ndim == 0 else out


def product_symbol_by_trace(a, b, theta, p, hbar=1.0):
    """2pi tr[V(theta, p) A B] sampled at the given points (the symbol of the
    truncated matrix product)."""
    prod = BandedOperator(a.n_max, a.entries @ b.entries)
    return symbol_by_trace(prod, theta, p, hbar)


def convolution_kernel(a, theta, p, theta1, p1, hbar=1.0):
    """G_A(theta, p; theta1, p1) = 2pi tr[V(theta, p) A V(theta1, p1)]."""
    v = kernel_matrix(theta, p, a.n_max, hbar)
    v1 = kernel_matrix(theta1, p1, a.n_max, hbar)
    return complex(2 * np.pi * np.trace(v @ a.entries @ v1))


def convolve_with_symbol(a, b_symbol, theta, p, hbar=1.0, window=20.0, n_theta=None):
    """int dpbar1 int dtheta1 G_A(theta, p; theta1, p1) B~(theta1, p1) over
    the finite momentum window |pbar1| <= window.

    The theta1 integral is done exactly on a uniform grid; the momentum
    integral is truncated, so the result approaches the product symbol
    (AB)~(theta, p) as the window grows.
    """
    n = a.n_max
    nt = n_theta or 4 * n + 4 * max(1, b_symbol.max_mode) + 8
    th1 = -np.pi + 2 * np.pi * np.arange(nt) / nt
    idx = np.arange(-n, n + 1)
    v = kernel_matrix(theta, p, n, hbar)
    left = 2 * np.pi * (v @ a.entries)  # contracts with V(theta1, p1)_{ki}
    half_sum = 0.5 * np.add.outer(idx, idx)
    # phase[t, k, i] = e^{i(i - k) theta1_t}
    phase = np.exp(1j * np.multiply.outer(th1, np.subtract.outer(idx, idx))).transpose(0, 2, 1)

    def integrand(x):
        # V(theta1, p1)_{ki} = e^{i(i-k) theta1} sinc pi(x - (k+i)/2) / 2pi
        sinc = sinc_eval(np.pi * (x[:, None, None] - half_sum[None]))
        b_vals = b_symbol(th1[None, :], hbar * x[:, None])  # [x, t]
        # theta1 average of e^{i(i-k) theta1} B~(theta1, p1)
        fourier = np.einsum("xt,tki->xki", b_vals, phase) / nt
        return np.einsum("ik,xki->x", left, sinc * fourier)

    return complex(pbar_quad(integrand, window=window, tails=False))


def sinc_moment(j, s):
    """Regularized moment int dpbar pbar^j sinc pi(pbar - s) = s^j.

    A distributional identity: the sinc has Fourier support in [-pi, pi], so
    pairing with pbar^j picks the j-th derivative of e^{i s v} at v = 0.
    """
    if int(j) != j or j < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {j!r}")
    return float(s) ** int(j)


def sinc_moment_regularized(j, s, etas=None, fit_degree=5):
    """Independent estimate of ``sinc_moment`` from the damped integrals
    I(eta) = int pbar^j sinc pi(pbar - s) e^{-eta pbar^2} dpbar, computed by
    quadrature for an eta sweep and extrapolated to eta = 0."""
    if int(j) != j or j < 0:
        raise ValueError(f"moment order must be a non-negative integer, got {j!r}")
    if etas is None:
        etas = np.geomspace(1e-2, 1e-4, 13)
    values = []
    for eta in etas:
        half = np.sqrt((40.0 + 2 * j * np.log(1.0 / eta)) / eta) + abs(s)
        f = lambda x, eta=eta: x ** j * sinc_eval(np.pi * (x - s)) * np.exp(-eta * x * x)
        values.append(pbar_quad(f, window=half, tails=False).real)
    coef = np.polyfit(np.asarray(etas), np.asarray(values), fit_degree)
    return float(coef[-1])


def triple_trace(theta, p, theta1, p1, theta2, p2, hbar=1.0):
    """Closed form of tr[V(theta, p) V(theta1, p1) V(theta2, p2)]:

        4/(2pi)^3 exp(-2i [p (theta1 - theta2) + p1 (theta2 - theta) + p2 (theta - theta1)] / hbar).
    """
    phase = p * (theta1 - theta2) + p1 * (theta2 - theta) + p2 * (theta - theta1)
    return 4 / (2 * np.pi) ** 3 * np.exp(-2j * np.asarray(phase) / hbar)
