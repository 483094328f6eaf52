"""Truncated circle basis e_n(phi) = exp(i n phi), n in [-n_max, n_max].

Wave functions are coefficient vectors, operators are complex matrices on
the same window.  Index ``i`` of an array corresponds to the angular
momentum quantum number ``n = i - n_max``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = [
    "TruncationWarning",
    "WaveFunction",
    "BandedOperator",
    "PendulumModel",
    "PhysicalConstants",
    "inner_product",
    "evaluate",
    "standard_operator",
    "op_mul",
    "op_apply",
    "commutator",
    "anticommutator",
    "sinc_eval",
    "sinc_deriv",
]


class TruncationWarning(UserWarning):
    """Result depends on matrix entries outside the finite basis window."""


def _indices(n_max):
    return np.arange(-n_max, n_max + 1)


# ---------------------------------------------------------------------------
# physical parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PendulumModel:
    """Rotor with periodic potential, H = gamma L^2 + U(theta).

    Parameters
    ----------
    inertia : float
        Moment of inertia m r0^2.  ``gamma = 1 / (2 inertia)``.
    amplitude : float
        Pendulum amplitude A in U = -A cos(mode * theta).
    hbar : float
        Planck's constant in the chosen action units.
    mode : int
        Fourier mode of the pendulum term.
    extra_modes : tuple of (k, A_k, B_k)
        Additional potential terms A_k cos k theta + B_k sin k theta.
    delta : float
        Covering-group offset of the angular momentum spectrum.  Only
        ``0`` is supported; anything else is rejected.
    """

    inertia: float = 1.0
    amplitude: float = 0.0
    hbar: float = 1.0
    mode: int = 1
    extra_modes: tuple = ()
    delta: float = 0.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        if not self.inertia > 0:
            raise ValueError("moment of inertia must be positive")
        if self.delta != 0:
            raise ValueError("fractional angular momenta (delta != 0) are not supported")
        if self.mode < 1:
            raise ValueError("pendulum mode must be a positive integer")
        for k, _, _ in self.extra_modes:
            if int(k) != k or k < 0:
                raise ValueError(f"potential mode {k!r} must be a non-negative integer")

    @classmethod
    def from_gamma(cls, gamma, amplitude=0.0, hbar=1.0, **kwargs):
        if not gamma > 0:
            raise ValueError("gamma must be positive")
        return cls(inertia=1.0 / (2.0 * gamma), amplitude=amplitude, hbar=hbar, **kwargs)

    @property
    def gamma(self):
        return 1.0 / (2.0 * self.inertia)

    @property
    def epsilon(self):
        """Rotational energy quantum hbar^2 / (2 m r0^2)."""
        return self.hbar ** 2 / (2.0 * self.inertia)

    def potential_modes(self):
        """List of ``(k, A_k, B_k)`` with U = sum_k A_k cos k t + B_k sin k t."""
        modes = {}
        if self.amplitude != 0:
            modes[self.mode] = (-float(self.amplitude), 0.0)
        for k, a, b in self.extra_modes:
            a0, b0 = modes.get(int(k), (0.0, 0.0))
            modes[int(k)] = (a0 + float(a), b0 + float(b))
        return [(k, a, b) for k, (a, b) in sorted(modes.items())]

    def potential_fourier(self):
        """Complex Fourier coefficients {k: U_k} with U = sum_k U_k e^{ik theta}."""
        out = {}
        for k, a, b in self.potential_modes():
            if k == 0:
                out[0] = out.get(0, 0) + a
            else:
                out[k] = out.get(k, 0) + 0.5 * (a - 1j * b)
                out[-k] = out.get(-k, 0) + 0.5 * (a + 1j * b)
        return out

    def potential(self, theta):
        theta = np.asarray(theta, dtype=float)
        u = np.zeros_like(theta)
        for k, a, b in self.potential_modes():
            u = u + a * np.cos(k * theta) + b * np.sin(k * theta)
        return u

    def potential_derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        du = np.zeros_like(theta)
        for k, a, b in self.potential_modes():
            du = du + k * (-a * np.sin(k * theta) + b * np.cos(k * theta))
        return du


PhysicalConstants = PendulumModel


# ---------------------------------------------------------------------------
# wave functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Truncated Fourier expansion psi(phi) = sum_n c_n e^{i n phi}."""

    n_max: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size != 2 * self.n_max + 1:
            raise ValueError(
                f"expected {2 * self.n_max + 1} coefficients for n_max={self.n_max}, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, m, n_max):
        if abs(m) > n_max:
            raise ValueError(f"basis index {m} outside window [-{n_max}, {n_max}]")
        c = np.zeros(2 * n_max + 1, dtype=complex)
        c[m + n_max] = 1.0
        return cls(n_max, c)

    @classmethod
    def from_modes(cls, modes: Mapping[int, complex], n_max, normalize=True):
        c = np.zeros(2 * n_max + 1, dtype=complex)
        for m, value in modes.items():
            if abs(m) > n_max:
                raise ValueError(f"mode {m} outside window [-{n_max}, {n_max}]")
            c[m + n_max] += value
        psi = cls(n_max, c)
        return psi.normalized() if normalize else psi

    @classmethod
    def gaussian(cls, n_max, center=0.0, width=2.0, angle=0.0):
        """Gaussian wave packet in angular momentum, peaked at ``center``,
        localized around the angle ``angle``."""
        n = _indices(n_max)
        c = np.exp(-0.5 * ((n - center) / width) ** 2 - 1j * n * angle)
        return cls(n_max, c).normalized()

    @classmethod
    def random(cls, n_max, rng=None, support=None):
        rng = np.random.default_rng(rng)
        c = rng.normal(size=2 * n_max + 1) + 1j * rng.normal(size=2 * n_max + 1)
        if support is not None:
            mask = np.abs(_indices(n_max)) > support
            c[mask] = 0.0
        return cls(n_max, c).normalized()

    @property
    def indices(self):
        return _indices(self.n_max)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def normalized(self):
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return WaveFunction(self.n_max, self.coeffs / nrm)

    def padded(self, n_max):
        if n_max < self.n_max:
            raise ValueError("padding cannot shrink the window")
        c = np.zeros(2 * n_max + 1, dtype=complex)
        off = n_max - self.n_max
        c[off:off + self.coeffs.size] = self.coeffs
        return WaveFunction(n_max, c)

    def coefficient(self, m):
        return self.coeffs[m + self.n_max] if abs(m) <= self.n_max else 0j

    def edge_weight(self, width=1):
        """Probability carried by the outermost ``width`` modes on each side."""
        p = np.abs(self.coeffs) ** 2
        return float(p[:width].sum() + p[-width:].sum())

    def __call__(self, phi):
        return evaluate(self, phi)

    def to_json(self):
        return json.dumps({"n_max": self.n_max,
                           "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs]})

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        c = np.array([complex(re, im) for re, im in doc["coeffs"]])
        return cls(int(doc["n_max"]), c)


def _common(psi2, psi1):
    n = max(psi2.n_max, psi1.n_max)
    return psi2.padded(n), psi1.padded(n)


def inner_product(psi2, psi1):
    """Scalar product (psi2, psi1) = sum_n conj(c2_n) c1_n."""
    psi2, psi1 = _common(psi2, psi1)
    return complex(np.vdot(psi2.coeffs, psi1.coeffs))


def evaluate(psi, phi):
    """psi(phi) at angle(s) ``phi``; 2 pi periodic."""
    phi = np.asarray(phi, dtype=float)
    phase = np.exp(1j * np.multiply.outer(phi, psi.indices))
    return phase @ psi.coeffs


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BandedOperator:
    """Matrix A_mn = (e_m, A e_n) on the window |m|, |n| <= n_max.

    Attributes
    ----------
    bandwidth : int
        Largest |m - n| carrying a nonzero entry.  Given explicitly it is
        checked; omitted it is measured from the entries.
    hermitian : bool
        When set, ``A_mn == conj(A_nm)`` is asserted exactly.
    trusted : int
        Entries with |m|, |n| <= trusted agree with the infinite-lattice
        operator.  Products shrink this radius; ``touches_edge`` reports it.
    """

    n_max: int
    entries: np.ndarray
    bandwidth: int | None = None
    hermitian: bool = False
    trusted: int | None = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        dim = 2 * self.n_max + 1
        if a.shape != (dim, dim):
            raise ValueError(f"entries must have shape {(dim, dim)}, got {a.shape}")
        offsets = np.subtract.outer(np.arange(dim), np.arange(dim))
        measured = int(np.abs(offsets[a != 0]).max()) if np.any(a != 0) else 0
        if self.bandwidth is None:
            object.__setattr__(self, "bandwidth", measured)
        elif measured > self.bandwidth:
            raise ValueError(f"entries extend to offset {measured} beyond declared bandwidth {self.bandwidth}")
        if self.hermitian and not np.array_equal(a, a.conj().T):
            raise ValueError("operator flagged hermitian but A != A^dagger")
        trusted = self.n_max if self.trusted is None else max(-1, min(int(self.trusted), self.n_max))
        object.__setattr__(self, "trusted", trusted)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def identity(cls, n_max):
        return cls(n_max, np.eye(2 * n_max + 1), hermitian=True)

    @classmethod
    def zeros(cls, n_max):
        return cls(n_max, np.zeros((2 * n_max + 1, 2 * n_max + 1)), hermitian=True)

    @property
    def indices(self):
        return _indices(self.n_max)

    @property
    def touches_edge(self):
        return self.trusted < self.n_max

    def element(self, m, n):
        return self.entries[m + self.n_max, n + self.n_max]

    def band(self, k):
        """Entries A_{n+k, n} together with the column indices n."""
        n = self.indices
        n = n[(np.abs(n + k) <= self.n_max)]
        return n, self.entries[n + k + self.n_max, n + self.n_max]

    def interior(self, radius=None):
        """Sub-block with |m|, |n| <= radius (defaults to the trusted radius)."""
        r = self.trusted if radius is None else radius
        sl = slice(self.n_max - r, self.n_max + r + 1)
        return self.entries[sl, sl]

    def dagger(self):
        return BandedOperator(self.n_max, self.entries.conj().T, self.bandwidth,
                              self.hermitian, self.trusted)

    def is_hermitian(self, atol=0.0):
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=atol))

    def _combine(self, other, entries):
        return BandedOperator(self.n_max, entries, trusted=min(self.trusted, other.trusted))

    def __add__(self, other):
        _check_same(self, other)
        return self._combine(other, self.entries + other.entries)

    def __sub__(self, other):
        _check_same(self, other)
        return self._combine(other, self.entries - other.entries)

    def __neg__(self):
        return BandedOperator(self.n_max, -self.entries, self.bandwidth, self.hermitian, self.trusted)

    def __mul__(self, scalar):
        if isinstance(scalar, BandedOperator):
            return NotImplemented
        return BandedOperator(self.n_max, scalar * self.entries, trusted=self.trusted)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, WaveFunction):
            return op_apply(self, other)
        return op_mul(self, other)

    def to_json(self):
        """Row-major band storage: for each row m = -n_max..n_max the entries
        (m, m + d) for d = -bandwidth..bandwidth, zero outside the window."""
        bw = self.bandwidth
        rows = []
        for m in self.indices:
            for d in range(-bw, bw + 1):
                n = m + d
                z = self.element(m, n) if abs(n) <= self.n_max else 0j
                rows.append([float(z.real), float(z.imag)])
        return json.dumps({"n_max": self.n_max, "bandwidth": bw, "hermitian": self.hermitian,
                           "trusted": self.trusted, "entries": rows})

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        n_max, bw = int(doc["n_max"]), int(doc["bandwidth"])
        flat = [complex(re, im) for re, im in doc["entries"]]
        if len(flat) != (2 * n_max + 1) * (2 * bw + 1):
            raise ValueError("band storage length does not match n_max and bandwidth")
        a = np.zeros((2 * n_max + 1, 2 * n_max + 1), dtype=complex)
        it = iter(flat)
        for m in range(-n_max, n_max + 1):
            for d in range(-bw, bw + 1):
                z = next(it)
                if abs(m + d) <= n_max:
                    a[m + n_max, m + d + n_max] = z
        return cls(n_max, a, bw, bool(doc.get("hermitian", False)), doc.get("trusted"))


def _check_same(a, b):
    if a.n_max != b.n_max:
        raise ValueError(f"incompatible windows: n_max={a.n_max} vs {b.n_max}")


def _shift_matrix(n_max, k):
    """Matrix with ones at (m, n) where m - n = k."""
    return np.eye(2 * n_max + 1, k=-k)


def standard_operator(kind, n_max, k=None, model=None, fourier=None, hbar=None):
    """Exact matrices of the elementary operators.

    Parameters
    ----------
    kind : {"C", "S", "L", "C_k", "S_k", "L2", "H", "U", "I"}
        cos(phi), sin(phi), (hbar/i) d/dphi, cos(k phi), sin(k phi), L^2,
        the Hamiltonian of ``model``, a multiplication operator with Fourier
        coefficients ``fourier`` ({k: U_k}), the identity.
    n_max : int
    k : int, optional
        Mode for C_k / S_k, 0 <= k <= 2 n_max.
    model : PendulumModel, optional
        Required for "H"; supplies hbar elsewhere when ``hbar`` is omitted.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if hbar is None:
        hbar = model.hbar if model is not None else 1.0
    dim = 2 * n_max + 1
    n = _indices(n_max)
    kind = {"L^2": "L2", "Ck": "C_k", "Sk": "S_k"}.get(kind, kind)

    if kind == "I":
        return BandedOperator.identity(n_max)
    if kind in ("C", "S"):
        k = 1
        kind = kind + "_k"
    if kind in ("C_k", "S_k"):
        if k is None or int(k) != k or not 0 <= k <= 2 * n_max:
            raise ValueError(f"mode k={k!r} must be an integer in [0, {2 * n_max}]")
        k = int(k)
        up, down = _shift_matrix(n_max, k), _shift_matrix(n_max, -k)
        if kind == "C_k":
            a = np.eye(dim) if k == 0 else 0.5 * (up + down)
        else:
            a = np.zeros((dim, dim)) if k == 0 else (up - down) / 2j
        return BandedOperator(n_max, a, bandwidth=k, hermitian=True)
    if kind == "L":
        return BandedOperator(n_max, np.diag(hbar * n).astype(complex), bandwidth=0, hermitian=True)
    if kind == "L2":
        return BandedOperator(n_max, np.diag((hbar * n) ** 2).astype(complex), bandwidth=0,
                              hermitian=True)
    if kind == "U":
        if fourier is None:
            raise ValueError("kind 'U' needs Fourier coefficients")
        return _multiplication_operator(n_max, fourier)
    if kind == "H":
        if model is None:
            raise ValueError("kind 'H' needs a PendulumModel")
        kinetic = np.diag(model.gamma * (model.hbar * n) ** 2).astype(complex)
        pot = _multiplication_operator(n_max, model.potential_fourier())
        a = kinetic + pot.entries
        herm = np.array_equal(a, a.conj().T)
        return BandedOperator(n_max, a, bandwidth=pot.bandwidth, hermitian=herm)
    raise ValueError(f"unknown operator kind {kind!r}")


def _multiplication_operator(n_max, fourier):
    dim = 2 * n_max + 1
    a = np.zeros((dim, dim), dtype=complex)
    bw = 0
    for k, value in fourier.items():
        if value == 0:
            continue
        if abs(k) > 2 * n_max:
            raise ValueError(f"Fourier mode {k} does not fit into the window n_max={n_max}")
        a += value * _shift_matrix(n_max, k)
        bw = max(bw, abs(k))
    herm = np.array_equal(a, a.conj().T)
    return BandedOperator(n_max, a, bandwidth=bw, hermitian=herm)


def op_mul(a, b, warn=True):
    """Matrix product on the window; the trusted radius shrinks by the
    smaller bandwidth because terms outside the window are missing."""
    _check_same(a, b)
    trusted = min(a.trusted, b.trusted) - min(a.bandwidth, b.bandwidth)
    bw = min(a.bandwidth + b.bandwidth, 2 * a.n_max)
    if warn and trusted < a.n_max:
        warnings.warn(f"product reaches the truncation edge; exact only for |m|,|n| <= {trusted}",
                      TruncationWarning, stacklevel=2)
    return BandedOperator(a.n_max, a.entries @ b.entries, bandwidth=bw, trusted=trusted)


def op_apply(a, psi):
    if a.n_max != psi.n_max:
        raise ValueError(f"incompatible windows: n_max={a.n_max} vs {psi.n_max}")
    return WaveFunction(psi.n_max, a.entries @ psi.coeffs)


def commutator(a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        ab, ba = op_mul(a, b), op_mul(b, a)
    return _edge_note(ab - ba)


def anticommutator(a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        ab, ba = op_mul(a, b), op_mul(b, a)
    return _edge_note(ab + ba)


def _edge_note(op):
    if op.touches_edge:
        warnings.warn(f"result exact only for |m|,|n| <= {op.trusted}", TruncationWarning,
                      stacklevel=3)
    return op


# ---------------------------------------------------------------------------
# sinc x = sin x / x and its derivatives
# ---------------------------------------------------------------------------

_TAYLOR_TERMS = 40


def sinc_eval(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def _taylor_threshold(order):
    # closed form cancels like order!/|x|^(order+1); Taylor is used below this
    return max(1.0, 0.3 * order + 0.5)


def _sinc_deriv_taylor(x, order):
    out = np.zeros_like(x)
    for k in range(_TAYLOR_TERMS):
        if 2 * k < order:
            continue
        coef = (-1) ** k * math.factorial(2 * k) / (
            math.factorial(2 * k - order) * math.factorial(2 * k + 1))
        out = out + coef * x ** (2 * k - order)
    return out


def _sinc_deriv_closed(x, order):
    # Leibniz rule on sin(x) * x^-1
    out = np.zeros_like(x)
    for i in range(order + 1):
        out = out + (math.comb(order, i) * (-1) ** i * math.factorial(i)
                     * np.sin(x + (order - i) * np.pi / 2) / x ** (i + 1))
    return out


def sinc_deriv(x, order=1):
    """``order``-th derivative of sin(x)/x, stable at and near x = 0."""
    if order < 0 or int(order) != order:
        raise ValueError("derivative order must be a non-negative integer")
    x = np.asarray(x, dtype=float)
    if order == 0:
        return sinc_eval(x)
    small = np.abs(x) < _taylor_threshold(order)
    out = np.empty_like(x)
    out[small] = _sinc_deriv_taylor(x[small], order)
    big = ~small
    out[big] = _sinc_deriv_closed(x[big], order)
    return out[()] if out.ndim == 0 else out
