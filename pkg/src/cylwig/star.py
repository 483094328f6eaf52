"""Moyal star product of polynomial symbols on the cylinder.

Fourier modes are eigenfunctions of d/dtheta, so the exponential
bidifferential operator exp((hbar/2i) Lambda) acts on a pair of terms as a
pair of momentum shifts:

    (P(p) e^{ik theta}) * (Q(p) e^{in theta})
        = P(p + hbar n / 2) Q(p - hbar k / 2) e^{i(k+n) theta}.

The rule is exact, associative and needs no operator-ordering convention.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .symbols import PhaseSpaceSymbol, _poly_add, _poly_mul, shift_poly

__all__ = ["star", "star_commutator", "star_anticommutator", "hbar_expansion",
           "commutator_expansion", "anticommutator_expansion"]


def star(a, b, hbar=1.0):
    """Exact star product a * b; hbar = 0 gives the pointwise product."""
    out = {}
    for k, pk in a.terms.items():
        for n, qn in b.terms.items():
            term = _poly_mul(shift_poly(pk, 0.5 * hbar * n), shift_poly(qn, -0.5 * hbar * k))
            out[k + n] = _poly_add(out[k + n], term) if k + n in out else term
    return PhaseSpaceSymbol(out)


def star_commutator(a, b, hbar=1.0):
    return star(a, b, hbar) - star(b, a, hbar)


def star_anticommutator(a, b, hbar=1.0):
    return star(a, b, hbar) + star(b, a, hbar)


def _derivatives(poly, top):
    out = [np.asarray(poly, dtype=complex)]
    for _ in range(top):
        d = out[-1]
        out.append(d[1:] * np.arange(1, d.size))
    return out


def hbar_expansion(a, b, order):
    """Coefficients [S_0, ..., S_order] with a * b = sum_r hbar^r S_r.

    Expanding the shifts in Taylor series gives, per pair of modes (k, n),

        S_r = sum_{i+j=r} (n/2)^i (-k/2)^j P^(i) Q^(j) / (i! j!),

    so S_0 is the pointwise product and S_1 = (1/2i)(dA/dp dB/dtheta -
    dA/dtheta dB/dp).  The series terminates at r = deg A + deg B.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    coeffs = [dict() for _ in range(order + 1)]
    for k, pk in a.terms.items():
        dp = _derivatives(pk, order)
        for n, qn in b.terms.items():
            dq = _derivatives(qn, order)
            for r in range(order + 1):
                acc = np.zeros(0, dtype=complex)
                for i in range(r + 1):
                    j = r - i
                    if dp[i].size == 0 or dq[j].size == 0:
                        continue
                    w = (0.5 * n) ** i * (-0.5 * k) ** j / (factorial(i) * factorial(j))
                    acc = _poly_add(acc, w * _poly_mul(dp[i], dq[j]))
                tgt = coeffs[r]
                tgt[k + n] = _poly_add(tgt[k + n], acc) if k + n in tgt else acc
    return [PhaseSpaceSymbol(c) for c in coeffs]


def commutator_expansion(a, b, order):
    """hbar-coefficients of a * b - b * a."""
    return [x - y for x, y in zip(hbar_expansion(a, b, order), hbar_expansion(b, a, order))]


def anticommutator_expansion(a, b, order):
    """hbar-coefficients of a * b + b * a."""
    return [x + y for x, y in zip(hbar_expansion(a, b, order), hbar_expansion(b, a, order))]
