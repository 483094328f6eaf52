"""Numerical integration over the momentum line and the angle circle.

Integrands built from sinc functions decay only like 1/|pbar| (single sinc)
or 1/pbar^2 (products), so a truncated window is not enough.  ``pbar_quad``
integrates a finite window with Gauss-Legendre panels and adds the two tails
analytically after fitting the asymptotic form

    f(x) ~ sum_j sum_w [a_jw cos(w x) + b_jw sin(w x)] / x^j ,   |x| > P,

which is exact for finite sums of shifted sincs (the 1/(x - s) factors
expand in powers of 1/x).  These routines are the independent cross-check
path; the library's primary results are closed forms.
"""

from __future__ import annotations

import numpy as np
from scipy.special import sici

__all__ = ["pbar_quad", "theta_grid", "theta_integrate", "tail_integral"]

_GL_ORDER = 12
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


def _panels(a, b, width=1.0):
    n = max(1, int(np.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel()
    return x, w


def tail_integral(nu, power, start):
    """E(nu) = int_start^inf exp(i nu x) x^-power dx for start > 0."""
    if power < 1:
        raise ValueError("power must be >= 1")
    if nu == 0:
        if power == 1:
            raise ValueError("1/x tail without oscillation diverges")
        return start ** (1 - power) / (power - 1)
    si, ci = sici(abs(nu) * start)
    e = -ci + 1j * np.sign(nu) * (np.pi / 2 - si)
    for j in range(2, power + 1):
        e = start ** (1 - j) * np.exp(1j * nu * start) / (j - 1) + 1j * nu / (j - 1) * e
    return e


def _tail(f, start, weight_freq, frequencies, max_power):
    # sample the tail on [start, 3 start], fit, integrate the model
    x, _ = _panels(start, 3.0 * start)
    vals = f(x)
    vals = vals.reshape(x.size, -1)
    u = start / x
    cols, integrals = [], []
    for w in frequencies:
        for j in range(1, max_power + 1):
            if w == 0:
                if j == 1:
                    continue
                cols.append(u ** j)
                integrals.append(start ** j * tail_integral(weight_freq, j, start))
            else:
                cols.append(np.cos(w * x) * u ** j)
                integrals.append(start ** j * 0.5 * (tail_integral(weight_freq + w, j, start)
                                                     + tail_integral(weight_freq - w, j, start)))
                cols.append(np.sin(w * x) * u ** j)
                integrals.append(start ** j * (tail_integral(weight_freq + w, j, start)
                                               - tail_integral(weight_freq - w, j, start)) / 2j)
    basis = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(basis, vals, rcond=None)
    return np.asarray(integrals) @ coef


def pbar_quad(f, window=60.0, weight_freq=0.0, frequencies=(0.0, np.pi, 2 * np.pi),
              max_power=8, tails=True):
    """Integral over the whole real pbar axis of ``f(x) * exp(i weight_freq x)``.

    Parameters
    ----------
    f : callable
        Vectorized in its argument; may return extra trailing axes, which are
        integrated independently.
    window : float
        Half width P of the explicitly integrated interval [-P, P].
    weight_freq : float
        Frequency of an optional Fourier weight.
    frequencies : sequence of float
        Oscillation frequencies of the tail model.
    tails : bool
        If False, return the bare window integral (for convergence studies).
    """
    x, w = _panels(-window, window)
    vals = np.asarray(f(x))
    extra = vals.shape[1:]
    vals = vals.reshape(x.size, -1)
    total = (w * np.exp(1j * weight_freq * x)) @ vals
    if tails:
        total = total + _tail(f, window, weight_freq, frequencies, max_power)
        total = total + _tail(lambda y: np.asarray(f(-y)), window, -weight_freq,
                              frequencies, max_power)
    return total.reshape(extra) if extra else total[0]


def theta_grid(n_points):
    """Uniform angles on [-pi, pi), endpoint-exclusive."""
    return -np.pi + 2 * np.pi * np.arange(n_points) / n_points


def theta_integrate(values, axis=0):
    """Trapezoid rule on a ``theta_grid``; exact for trigonometric polynomials
    of degree below the number of nodes."""
    values = np.asarray(values)
    return 2 * np.pi * values.mean(axis=axis)
