import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylwig.basis import WaveFunction
from cylwig.checks import random_symbol
from cylwig.field import ShiftedSincField
from cylwig.kernel import moyal_eval
from cylwig.symbols import PhaseSpaceSymbol as Sym, shift_poly


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=100, deadline=None)
def test_shift_poly(coeffs, c, x):
    a = np.array(coeffs, dtype=complex)
    lhs = np.polynomial.polynomial.polyval(x, shift_poly(a, c))
    rhs = np.polynomial.polynomial.polyval(x + c, a)
    assert np.isclose(lhs, rhs, rtol=1e-9, atol=1e-9)


def test_symbol_calculus():
    sym = Sym.p(3) * Sym.cos(2)
    assert sym.d_p() == Sym.p(2, 3.0) * Sym.cos(2)
    assert sym.d_theta() == Sym.p(3) * Sym.sin(2, -2.0)
    assert np.isclose(sym.shift_p(0.5)(0.3, 1.0), sym(0.3, 1.5))
    assert sym.is_hermitian() and not Sym.exp(1).is_hermitian()
    assert (sym - sym).is_zero()


def test_trig_terms_reassemble():
    rng = np.random.default_rng(6)
    sym = random_symbol(rng, 3, 3)
    assert Sym.from_trig_terms(sym.trig_terms()).allclose(sym)


def test_field_matches_direct_moyal_sum():
    rng = np.random.default_rng(12)
    a, b = WaveFunction.random(4, rng), WaveFunction.random(4, rng)
    f = ShiftedSincField.from_moyal(a, b)
    th, pb = np.linspace(-3, 3, 9), np.linspace(-4, 4, 17)
    t, p = np.meshgrid(th, pb, indexing="ij")
    assert np.allclose(f.grid(th, pb), moyal_eval(a, b, t, p), atol=1e-14)
    # shifting by one half-step moves pbar by 1/2
    assert np.allclose(f.shift(1).grid(th, pb), moyal_eval(a, b, t, p + 0.5), atol=1e-14)


def test_field_theta_derivative_by_finite_difference():
    f = ShiftedSincField.from_wavefunction(WaveFunction.random(3, rng=2))
    th, pb, h = np.array([0.4]), np.array([0.3, 1.1]), 1e-5
    fd = (f.grid(th + h, pb) - f.grid(th - h, pb)) / (2 * h)
    assert np.allclose(f.d_theta().grid(th, pb), fd, atol=1e-8)


def test_field_p_derivative_by_finite_difference():
    f = ShiftedSincField.from_wavefunction(WaveFunction.random(3, rng=4))
    th, pb, h = np.array([-0.7]), np.array([0.0, 0.25, 2.2]), 1e-5
    fd = (f.grid(th, pb + h) - f.grid(th, pb - h)) / (2 * h)
    assert np.allclose(f.grid(th, pb, p_order=1), fd, atol=1e-8)


def test_field_reality_and_marginals():
    psi = WaveFunction.random(4, rng=8)
    f = ShiftedSincField.from_wavefunction(psi)
    assert f.is_real()
    assert np.isclose(f.integral(), 1.0)
    th = np.linspace(-3, 3, 7)
    assert np.allclose(f.theta_marginal(th), np.abs(psi(th)) ** 2 / (2 * np.pi))


def test_from_terms_rejects_off_lattice_offsets():
    with pytest.raises(ValueError):
        ShiftedSincField.from_terms({(0, 0.3): 1.0})
    g = ShiftedSincField.from_terms({(1, 0.5): 2.0, (0, -1.0): 1.0})
    assert g.terms() == {(0, -1.0): 1 + 0j, (1, 0.5): 2 + 0j}
