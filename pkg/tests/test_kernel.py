import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylwig.basis import WaveFunction, inner_product, standard_operator
from cylwig.field import ShiftedSincField
from cylwig.kernel import (DegenerateAnchorError, MoyalCoefficients, PhaseSpaceGrid, kernel,
                           kernel_matrix, kernel_orthogonality, kernel_orthogonality_quadrature,
                           marginals, momentum_filter, moyal_eval, moyal_eval_quadrature,
                           overlap, overlap_quadrature, purity, recover_wavefunction,
                           trace_product, wigner_eval, wigner_from_density, write_grid_csv)


def test_basis_state_wigner_is_sinc():
    theta = np.linspace(-3, 3, 7)
    pb = np.linspace(-4, 4, 33)
    t, p = np.meshgrid(theta, pb, indexing="ij")
    w = wigner_eval(WaveFunction.basis(0, 3), t, p)
    assert np.allclose(w, np.sinc(p) / (2 * np.pi), atol=1e-15)


def test_kernel_hermitian_and_trace():
    # tr V(theta, p) = (1/2pi) sum_n sinc pi(pbar - n)
    v = kernel_matrix(0.7, 0.3, 6)
    assert np.allclose(v, v.conj().T)
    assert np.isclose(np.trace(v).real, np.sinc(0.3 - np.arange(-6, 7)).sum() / (2 * np.pi))


@pytest.mark.parametrize("k,l,m,n", [(0, 0, 0, 0), (1, 2, 2, 1), (1, 2, 1, 2), (-3, 2, 2, -3),
                                     (0, 1, 1, 1), (2, 2, 2, 2)])
def test_kernel_orthogonality_routes_agree(k, l, m, n):
    exact = kernel_orthogonality(k, l, m, n)
    assert exact == float(k == n and l == m)
    assert abs(kernel_orthogonality_quadrature(k, l, m, n) - exact) < 1e-6


def test_moyal_direct_vs_quadrature():
    rng = np.random.default_rng(7)
    psi2, psi1 = WaveFunction.random(4, rng), WaveFunction.random(4, rng)
    th = rng.uniform(-np.pi, np.pi, 20)
    p = rng.uniform(-5, 5, 20)
    assert np.allclose(moyal_eval(psi2, psi1, th, p), moyal_eval_quadrature(psi2, psi1, th, p),
                       atol=1e-12)


def test_moyal_hermitian_symmetry():
    rng = np.random.default_rng(8)
    psi2, psi1 = WaveFunction.random(3, rng), WaveFunction.random(3, rng)
    th, p = rng.uniform(-3, 3, 10), rng.uniform(-3, 3, 10)
    assert np.allclose(moyal_eval(psi2, psi1, th, p), np.conj(moyal_eval(psi1, psi2, th, p)))


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_normalization_purity_overlap(seed, n):
    rng = np.random.default_rng(seed)
    a, b = WaveFunction.random(n, rng), WaveFunction.random(n, rng)
    fa = ShiftedSincField.from_wavefunction(a)
    assert abs(fa.integral() - 1) < 1e-12
    assert abs(purity(a) - 1 / (2 * np.pi)) < 1e-12
    assert abs(overlap(a, b) - abs(inner_product(a, b)) ** 2) < 1e-10


def test_overlap_quadrature_cross_check():
    rng = np.random.default_rng(2)
    a, b = WaveFunction.random(3, rng), WaveFunction.random(3, rng)
    assert abs(overlap_quadrature(a, b) - overlap(a, b)) < 1e-6


def test_mixed_state_purity():
    rho = MoyalCoefficients.diagonal({0: 0.5, 1: 0.5}, 3)
    assert np.isclose(purity(rho), 0.5 / (2 * np.pi))
    assert rho.is_positive()


def test_density_validation():
    with pytest.raises(ValueError):
        MoyalCoefficients(1, np.eye(3))  # trace 3
    bad = np.zeros((3, 3), complex)
    bad[0, 1] = 1
    bad[1, 1] = bad[0, 0] = 0.5
    with pytest.raises(ValueError):
        MoyalCoefficients(1, bad)


def test_wigner_from_density_matches_pure():
    psi = WaveFunction.random(4, rng=5)
    th, p = np.linspace(-3, 3, 9), np.linspace(-2, 2, 9)
    rho = MoyalCoefficients.pure(psi)
    assert np.allclose(wigner_from_density(rho, th, p), wigner_eval(psi, th, p), atol=1e-14)


def test_marginals():
    psi = WaveFunction.random(5, rng=11)
    tm, omega = marginals(psi)
    th = np.linspace(-np.pi, np.pi, 13)
    assert np.allclose(tm(th), np.abs(psi(th)) ** 2 / (2 * np.pi))
    # omega at integers is the momentum distribution
    assert np.allclose(omega(np.arange(-5, 6).astype(float)), np.abs(psi.coeffs) ** 2)


def test_momentum_filter():
    rng = np.random.default_rng(4)
    a, b = WaveFunction.random(4, rng), WaveFunction.random(4, rng)
    for m in (-2, 0, 3):
        expect = np.conj(a.coefficient(m)) * b.coefficient(m)
        assert abs(momentum_filter(a, b, m) - expect) < 1e-10


def test_recovery_round_trip():
    psi = WaveFunction.gaussian(6, center=1.0, width=1.5, angle=0.4)
    rec = recover_wavefunction(lambda t, p: wigner_eval(psi, t, p), 6)
    assert 1 - abs(inner_product(rec, psi)) ** 2 < 1e-8
    assert abs(np.angle(rec(0.0))) < 1e-12


def test_recovery_degenerate_anchor():
    # psi(theta) = sin(theta) vanishes at theta = 0
    psi = WaveFunction.from_modes({1: 1, -1: -1}, 3)
    with pytest.raises(DegenerateAnchorError):
        recover_wavefunction(lambda t, p: wigner_eval(psi, t, p), 3)


def test_trace_product_exact_and_quadrature():
    rng = np.random.default_rng(0)
    n = 3
    a = standard_operator("C_k", n, k=1) * (1 + 0.5j) + standard_operator("L", n)
    b = standard_operator("S_k", n, k=2) + standard_operator("L2", n) * 0.3
    # non-symmetric test matrix exercises the index order
    from cylwig.basis import BandedOperator
    m = BandedOperator(n, rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7)), bandwidth=6)
    for x, y in [(a, b), (m, b), (a, m)]:
        ref = np.trace(x.entries @ y.entries)
        assert np.isclose(trace_product(x, y), ref, atol=1e-12)
    assert np.isclose(trace_product(a, m, method="quadrature"), np.trace(a.entries @ m.entries),
                      atol=1e-6)


def test_grid_parse_and_csv():
    g = PhaseSpaceGrid.parse("t=8,p=-2:2:5")
    assert g.theta.size == 8 and np.allclose(g.pbar, [-2, -1, 0, 1, 2])
    with pytest.raises(ValueError):
        PhaseSpaceGrid.parse("t=0,p=1:0:3")
    buf = io.StringIO()
    write_grid_csv([0.0], [0.1, 0.2], np.array([[1 / 3, 2 / 3]]), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "theta,pbar,value"
    assert lines[1] == "0,0.10000000000000001,0.33333333333333331"


def test_kernel_scales_with_hbar():
    # V depends on p only through p / hbar
    assert np.isclose(kernel(1, 2, 0.3, 0.8, hbar=0.5), kernel(1, 2, 0.3, 1.6, hbar=1.0))
