import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylwig.basis import BandedOperator, PendulumModel, TruncationWarning, standard_operator
from cylwig.checks import random_symbol
from cylwig.symbols import PhaseSpaceSymbol as Sym
from cylwig.weyl import (SampledSymbol, convolve_with_symbol, product_symbol_by_trace,
                         sinc_moment, sinc_moment_regularized, symbol_by_trace, triple_trace,
                         weyl_quantize, weyl_symbol)


def test_elementary_symbols():
    n = 6
    assert weyl_symbol(standard_operator("C", n)) == Sym.cos(1)
    assert weyl_symbol(standard_operator("S", n)) == Sym.sin(1)
    assert weyl_symbol(standard_operator("L", n, hbar=0.5), hbar=0.5) == Sym.p()
    assert weyl_symbol(standard_operator("L2", n)) == Sym.p(2)
    assert weyl_symbol(standard_operator("C_k", n, k=3)) == Sym.cos(3)


def test_hamiltonian_symbol():
    model = PendulumModel.from_gamma(0.5, amplitude=1.0)
    sym = weyl_symbol(standard_operator("H", 8, model=model))
    assert sym == Sym.p(2, 0.5) + Sym.cos(1, -1.0)


def test_p_squared_quantizes_to_diagonal():
    a = weyl_quantize(Sym.p(2), 5, hbar=0.5)
    assert np.array_equal(a.entries, np.diag((0.5 * np.arange(-5, 6)) ** 2).astype(complex))


def test_trace_route_matches_band_sum():
    # both routes see the same window: 2pi tr[A V] = sum over bands of P_k(n + k/2) shifted sincs
    rng = np.random.default_rng(1)
    sym = random_symbol(rng, max_mode=2, max_degree=2)
    n_max = 6
    a = weyl_quantize(sym, n_max)
    th, p = rng.uniform(-3, 3, 6), rng.uniform(-2, 2, 6)
    idx = np.arange(-n_max, n_max + 1)
    direct = np.zeros(th.size, dtype=complex)
    for m in idx:
        for n in idx:
            if m - n not in sym.modes():
                continue
            s = 0.5 * (m + n)
            direct += (np.polynomial.polynomial.polyval(s, sym.poly(m - n)) * np.exp(1j * (m - n) * th)
                       * np.sinc(p - s))
    assert np.allclose(symbol_by_trace(a, th, p), direct, atol=1e-12)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_symbol_quantize_round_trip(seed):
    sym = random_symbol(np.random.default_rng(seed), max_mode=4, max_degree=4)
    assert weyl_symbol(weyl_quantize(sym, 12)) == sym


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([0.5, 1.0, 0.25]))
@settings(max_examples=20, deadline=None)
def test_round_trip_with_hbar(seed, hbar):
    sym = random_symbol(np.random.default_rng(seed), max_mode=2, max_degree=3)
    assert weyl_symbol(weyl_quantize(sym, 10, hbar), hbar).allclose(sym, atol=1e-9)


def test_non_polynomial_band_falls_back():
    n = 8
    a = BandedOperator(n, np.diag(np.exp(np.arange(-n, n + 1) / 3.0)).astype(complex), bandwidth=0)
    sym = weyl_symbol(a)
    assert isinstance(sym, SampledSymbol) and not sym.exact
    # the sampled symbol still equals the trace route
    assert np.isclose(sym(0.3, 0.7), symbol_by_trace(a, 0.3, 0.7))


def test_quantize_warns_on_oversized_modes():
    with pytest.warns(TruncationWarning):
        weyl_quantize(Sym.cos(9), 4)


def test_quantize_hermitian_flag():
    assert weyl_quantize(Sym.p(1) * Sym.cos(1), 4).hermitian
    assert not weyl_quantize(Sym.sin(1, 1j), 4).hermitian


def test_sinc_moment_closed_form_vs_regularized():
    for j, s in [(0, 0.0), (1, 0.5), (2, 3.0), (3, -1.5), (4, 1.0)]:
        assert np.isclose(sinc_moment_regularized(j, s), sinc_moment(j, s), rtol=1e-8, atol=1e-8)
    with pytest.raises(ValueError):
        sinc_moment(-1, 0.0)


def test_convolution_window_converges():
    a = standard_operator("C", 6)
    b = Sym.p(1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        target = product_symbol_by_trace(a, weyl_quantize(b, 6), 0.4, 0.6)
    errs = [abs(convolve_with_symbol(a, b, 0.4, 0.6, window=w) - target) for w in (10, 40, 80)]
    assert errs[2] < errs[1] < errs[0]


def test_triple_trace_properties():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-2, 2, size=(3, 2))
    (t, p), (t1, p1), (t2, p2) = pts
    v = triple_trace(t, p, t1, p1, t2, p2)
    assert np.isclose(abs(v), 4 / (2 * np.pi) ** 3)
    assert np.isclose(triple_trace(t1, p1, t2, p2, t, p), v)
    # swapping two points conjugates the phase
    assert np.isclose(triple_trace(t1, p1, t, p, t2, p2), np.conj(v))


def test_triple_trace_at_coincident_points():
    assert np.isclose(triple_trace(0.3, 1.2, 0.3, 1.2, 0.3, 1.2), 4 / (2 * np.pi) ** 3)


def test_identity_kernel_reproduces_smooth_symbol():
    # G_I is the symbol of V(theta1, p1) itself; smeared against b it returns b
    b = Sym.cos(2, 0.5) + Sym.sin(1)
    target = b(0.4, 0.6)
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for n in (6, 12, 24):
            ident = standard_operator("I", n)
            truncated = product_symbol_by_trace(ident, weyl_quantize(b, n), 0.4, 0.6)
            window_errs = [abs(convolve_with_symbol(ident, b, 0.4, 0.6, window=w) - truncated)
                           for w in (10, 40, 80)]
            assert window_errs[2] < window_errs[1] < window_errs[0]
            errs.append(abs(convolve_with_symbol(ident, b, 0.4, 0.6, window=80) - target))
    assert errs[2] < errs[1] < errs[0]
