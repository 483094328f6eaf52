"""Exact phase-space symbols  sum_k P_k(p) e^{ik theta}  with polynomial P_k."""

from __future__ import annotations

from math import comb, factorial
from numbers import Number

import numpy as np

__all__ = ["PhaseSpaceSymbol", "shift_poly"]


def _trim(c):
    c = np.asarray(c, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1].copy() if nz.size else c[:0].copy()


def shift_poly(coeffs, c):
    """Ascending coefficients of P(p + c) given those of P(p)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    deg = coeffs.size - 1
    out = np.zeros_like(coeffs)
    for j in range(deg + 1):
        if coeffs[j] == 0:
            continue
        for i in range(j + 1):
            out[i] += coeffs[j] * comb(j, i) * c ** (j - i)
    return out


def _poly_mul(a, b):
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=complex)
    return np.convolve(a, b)


def _poly_add(a, b):
    out = np.zeros(max(a.size, b.size), dtype=complex)
    out[: a.size] += a
    out[: b.size] += b
    return out


class PhaseSpaceSymbol:
    """Finite sum of P_k(p) e^{ik theta} with complex polynomial P_k.

    Parameters
    ----------
    terms : mapping
        Fourier mode k to ascending coefficients of P_k in powers of p.
        Zero polynomials are dropped and trailing zeros trimmed, so equality
        is an exact coefficient comparison.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, c in (terms or {}).items():
            c = _trim(c)
            if c.size:
                clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, value):
        return cls({0: [value]})

    @classmethod
    def p(cls, power=1, coeff=1.0):
        c = np.zeros(power + 1, dtype=complex)
        c[power] = coeff
        return cls({0: c})

    @classmethod
    def cos(cls, k=1, coeff=1.0):
        if k == 0:
            return cls.constant(coeff)
        return cls({k: [coeff / 2], -k: [coeff / 2]})

    @classmethod
    def sin(cls, k=1, coeff=1.0):
        if k == 0:
            return cls()
        return cls({k: [coeff / 2j], -k: [-coeff / 2j]})

    @classmethod
    def exp(cls, k=1, coeff=1.0):
        return cls({k: [coeff]})

    @classmethod
    def from_trig_terms(cls, items):
        """From (coeff, p_power, trig, k) tuples, trig in {"cos", "sin", None}."""
        out = cls()
        for coeff, j, trig, k in items:
            if trig is None or (trig == "cos" and k == 0):
                base = cls.constant(1.0)
            elif trig == "cos":
                base = cls.cos(k)
            elif trig == "sin":
                if k == 0:
                    raise ValueError("sin(0 t) is not a valid term")
                base = cls.sin(k)
            else:
                raise ValueError(f"unknown trig function {trig!r}")
            out = out + base * cls.p(j, coeff)
        return out

    # -- views --------------------------------------------------------------

    @property
    def terms(self):
        return {k: v.copy() for k, v in self._terms.items()}

    def modes(self):
        return list(self._terms)

    def poly(self, k):
        return self._terms.get(k, np.zeros(0, dtype=complex)).copy()

    @property
    def degree(self):
        return max((c.size - 1 for c in self._terms.values()), default=-1)

    @property
    def max_mode(self):
        return max((abs(k) for k in self._terms), default=0)

    def is_zero(self):
        return not self._terms

    def trig_terms(self):
        """Real-trig decomposition [(coeff, j, trig, k)] with k >= 0 using
        P_k e^{ik t} + P_-k e^{-ik t} = (P_k + P_-k) cos kt + i (P_k - P_-k) sin kt."""
        out = []
        for k in sorted({abs(k) for k in self._terms}):
            if k == 0:
                for j, c in enumerate(self.poly(0)):
                    if c != 0:
                        out.append((complex(c), j, None, 0))
                continue
            a, b = self.poly(k), self.poly(-k)
            cos_part, sin_part = _poly_add(a, b), 1j * _poly_add(a, -b)
            for j, c in enumerate(cos_part):
                if c != 0:
                    out.append((complex(c), j, "cos", k))
            for j, c in enumerate(sin_part):
                if c != 0:
                    out.append((complex(c), j, "sin", k))
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Number):
            other = PhaseSpaceSymbol.constant(other)
        out = self.terms
        for k, c in other._terms.items():
            out[k] = _poly_add(out[k], c) if k in out else c
        return PhaseSpaceSymbol(out)

    __radd__ = __add__

    def __neg__(self):
        return PhaseSpaceSymbol({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Scalar multiple, or the pointwise (classical) product."""
        if isinstance(other, Number):
            return PhaseSpaceSymbol({k: other * c for k, c in self._terms.items()})
        if not isinstance(other, PhaseSpaceSymbol):
            return NotImplemented
        out = {}
        for k, a in self._terms.items():
            for n, b in other._terms.items():
                prod = _poly_mul(a, b)
                out[k + n] = _poly_add(out[k + n], prod) if k + n in out else prod
        return PhaseSpaceSymbol(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1.0 / scalar)

    def __eq__(self, other):
        if not isinstance(other, PhaseSpaceSymbol):
            return NotImplemented
        return (self._terms.keys() == other._terms.keys()
                and all(np.array_equal(c, other._terms[k]) for k, c in self._terms.items()))

    def __hash__(self):
        return hash(tuple((k, tuple(c)) for k, c in self._terms.items()))

    def allclose(self, other, atol=1e-12):
        diff = self - other
        return all(np.all(np.abs(c) <= atol) for c in diff._terms.values())

    def max_abs_coeff(self):
        return max((float(np.abs(c).max()) for c in self._terms.values()), default=0.0)

    # -- calculus -----------------------------------------------------------

    def conj(self):
        """Complex conjugate function: conj(P_k) moves to mode -k."""
        return PhaseSpaceSymbol({-k: c.conj() for k, c in self._terms.items()})

    def is_hermitian(self, atol=0.0):
        """Real-valued symbol: P_-k = conj(P_k) coefficientwise."""
        if atol == 0.0:
            return self == self.conj()
        return self.allclose(self.conj(), atol)

    def d_p(self, order=1):
        out = {}
        for k, c in self._terms.items():
            d = c
            for _ in range(order):
                d = d[1:] * np.arange(1, d.size)
            out[k] = d
        return PhaseSpaceSymbol(out)

    def d_theta(self, order=1):
        return PhaseSpaceSymbol({k: (1j * k) ** order * c for k, c in self._terms.items()})

    def shift_p(self, amount):
        return PhaseSpaceSymbol({k: shift_poly(c, amount) for k, c in self._terms.items()})

    def taylor_p(self, j):
        """Ascending-coefficient array of the j-th p-derivative divided by j!."""
        return self.d_p(j) / factorial(j)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, theta, p):
        theta, p = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(p, dtype=float))
        out = np.zeros(theta.shape, dtype=complex)
        for k, c in self._terms.items():
            out += np.polynomial.polynomial.polyval(p, c) * np.exp(1j * k * theta)
        return out[()] if out.ndim == 0 else out

    def __repr__(self):
        body = ", ".join(f"{k}: {list(c)}" for k, c in self._terms.items())
        return f"PhaseSpaceSymbol({{{body}}})"
