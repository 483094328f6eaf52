"""Identity suite shared by the ``check`` command and the test-suite.

Every check recomputes an identity by two independent routes (closed form
versus quadrature, phase space versus matrix algebra) and compares at a
fixed tolerance.  Each returns a ``CheckResult``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .basis import (BandedOperator, PendulumModel, TruncationWarning, WaveFunction, anticommutator,
                    commutator, evaluate, inner_product, op_mul, standard_operator)
from .dynamics import (bloch_residual, calibrate_energy_boundary, calibrate_liouville_boundary,
                       continuity_residual, diagonal_density_rhs, eigensystem, energy_residual,
                       evolve_schrodinger, liouville_boundary_prefactor, liouville_residual,
                       quantum_side_diagonal, thermal_state, time_derivative_field, wigner_field)
from .field import ShiftedSincField
from .kernel import (MoyalCoefficients, PhaseSpaceGrid, kernel_orthogonality,
                     kernel_orthogonality_quadrature, momentum_filter, moyal_eval, overlap, purity,
                     recover_wavefunction, wigner_eval)
from .quadrature import pbar_quad, theta_grid, theta_integrate
from .star import commutator_expansion, anticommutator_expansion, star
from .symbols import PhaseSpaceSymbol as Sym
from .weyl import sinc_moment, sinc_moment_regularized, weyl_quantize, weyl_symbol

__all__ = ["CheckResult", "ACCEPTANCE", "SUITES", "run_suite", "random_symbol"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _rng(seed):
    return np.random.default_rng(seed)


def random_symbol(rng, max_mode=3, max_degree=3, dyadic=True, hermitian=False):
    """Random polynomial symbol; dyadic coefficients keep all arithmetic exact."""
    terms = {}
    for k in range(-max_mode, max_mode + 1):
        deg = int(rng.integers(0, max_degree + 1))
        if dyadic:
            c = (rng.integers(-8, 9, deg + 1) + 1j * rng.integers(-8, 9, deg + 1)) / 4
        else:
            c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        terms[k] = c
    sym = Sym(terms)
    if hermitian:
        sym = (sym + sym.conj()) * 0.5
    return sym


def _quiet(fn):
    def wrapped(*args, **kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            return fn(*args, **kwargs)
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


# ---------------------------------------------------------------------------
# acceptance criteria
# ---------------------------------------------------------------------------

def check_kernel_orthogonality():
    """Closed form equals delta_kn delta_lm exactly for |indices| <= 8;
    quadrature agrees within 1e-6."""
    rng = range(-8, 9)
    bad = sum(kernel_orthogonality(k, l, m, n) != float(k == n and l == m)
              for k, l, m, n in itertools.product(rng, repeat=4))
    tuples = list(itertools.product(range(-2, 3), repeat=4))
    r = _rng(1)
    tuples += [tuple(r.integers(-8, 9, 4)) for _ in range(60)]
    tuples += [(k, l, l, k) for k, l in r.integers(-8, 9, (20, 2))]
    err = max(abs(kernel_orthogonality_quadrature(*t) - kernel_orthogonality(*t)) for t in tuples)
    ok = bad == 0 and err < 1e-6
    return CheckResult("1 kernel orthogonality", ok,
                       f"closed-form mismatches {bad} of 83521; quadrature max err {err:.2e} (tol 1e-6)")


def check_normalization_purity():
    """Normalization and purity exact to 1e-12 for 100 random states;
    overlap equals |<psi2, psi1>|^2 to 1e-10."""
    r = _rng(2)
    norm_err = pur_err = ov_err = 0.0
    for _ in range(100):
        psi = WaveFunction.random(int(r.integers(1, 9)), r)
        f = wigner_field(psi)
        norm_err = max(norm_err, abs(f.integral() - 1))
        pur_err = max(pur_err, abs(purity(psi) - 1 / (2 * np.pi)))
        other = WaveFunction.random(psi.n_max, r)
        ov_err = max(ov_err, abs(overlap(other, psi) - abs(inner_product(other, psi)) ** 2))
    ok = norm_err < 1e-12 and pur_err < 1e-12 and ov_err < 1e-10
    return CheckResult("2 normalization/purity/overlap", ok,
                       f"norm {norm_err:.1e}, purity {pur_err:.1e} (tol 1e-12); overlap {ov_err:.1e} (tol 1e-10)")


@_quiet
def check_symbol_table():
    """Symbols of the elementary operators match exactly."""
    n = 8
    model = PendulumModel.from_gamma(0.5, amplitude=0.75)
    L, C, S = (standard_operator(x, n) for x in ("L", "C", "S"))
    p, cos, sin = Sym.p(), Sym.cos(), Sym.sin()
    table = {
        "C": (C, cos),
        "S": (S, sin),
        "L": (L, p),
        "L2": (standard_operator("L2", n), Sym.p(2)),
        "C2": (standard_operator("C_k", n, k=2), Sym.cos(2)),
        "C3": (standard_operator("C_k", n, k=3), Sym.cos(3)),
        "S2": (standard_operator("S_k", n, k=2), Sym.sin(2)),
        "H": (standard_operator("H", n, model=model), 0.5 * Sym.p(2) - 0.75 * cos),
        "LC": (op_mul(L, C), p * cos + 0.5j * sin),
        "CL": (op_mul(C, L), p * cos - 0.5j * sin),
        "[L,C]": (commutator(L, C), 1j * sin),
        "{L,C}": (anticommutator(L, C), 2 * p * cos),
    }
    wrong = [name for name, (op, expected) in table.items() if weyl_symbol(op) != expected]
    return CheckResult("3 Weyl symbol table", not wrong,
                       f"{len(table) - len(wrong)}/{len(table)} exact" + (f"; wrong: {wrong}" if wrong else ""))


def _random_operator_polynomial(r, n):
    """Random sum of products of L, C_k, S_k (banded, polynomial bands)."""
    ops = [standard_operator("L", n), standard_operator("C", n), standard_operator("S", n),
           standard_operator("C_k", n, k=2), standard_operator("S_k", n, k=2)]
    total = BandedOperator.zeros(n)
    for _ in range(3):
        term = BandedOperator.identity(n)
        for _ in range(int(r.integers(1, 4))):
            term = op_mul(term, ops[int(r.integers(len(ops)))], warn=False)
        total = total + complex(r.integers(-4, 5), r.integers(-4, 5)) / 2 * term
    return total


@_quiet
def check_round_trips():
    """quantize(symbol(A)) = A on interior entries; symbol(quantize(s)) = s;
    the p^2 example gives hbar^2 m^2 delta_mn."""
    r = _rng(4)
    n = 10
    failures = []
    named = {"C": standard_operator("C", n), "S": standard_operator("S", n),
             "L": standard_operator("L", n), "L2": standard_operator("L2", n),
             "H": standard_operator("H", n, model=PendulumModel.from_gamma(0.5, amplitude=0.75)),
             "LC": op_mul(standard_operator("L", n), standard_operator("C", n)),
             "CL": op_mul(standard_operator("C", n), standard_operator("L", n))}
    mats = list(named.items())
    for i in range(25):
        mats.append((f"rand-sym-{i}", weyl_quantize(random_symbol(r, 4, 4), n)))
    for i in range(25):
        mats.append((f"rand-ops-{i}", _random_operator_polynomial(r, n)))
    for name, a in mats:
        sym = weyl_symbol(a)
        back = weyl_quantize(sym, n)
        t = a.trusted
        if not getattr(sym, "exact", True) or not np.array_equal(back.interior(t), a.interior(t)):
            failures.append(name)
    sym_fail = 0
    for _ in range(50):
        s = random_symbol(r, 4, 4)
        if weyl_symbol(weyl_quantize(s, n)) != s:
            sym_fail += 1
    hbar = 0.5
    a = weyl_quantize(Sym.p(2), n, hbar=hbar)
    m = np.arange(-n, n + 1)
    p2_ok = np.array_equal(a.entries, np.diag((hbar * m) ** 2).astype(complex))
    ok = not failures and sym_fail == 0 and p2_ok
    return CheckResult("4 quantization round trips", ok,
                       f"matrix round trips failed {len(failures)}/{len(mats)}; symbol round trips "
                       f"failed {sym_fail}/50; p^2 -> hbar^2 m^2 {'exact' if p2_ok else 'WRONG'}")


@_quiet
def check_star_homomorphism():
    """quantize(A * B) = quantize(A) quantize(B) on the interior (1e-10 of the
    matrix scale); associativity exact; p * cos and cos * p exact."""
    r = _rng(5)
    n = 12
    worst = 0.0
    for _ in range(50):
        a = random_symbol(r, 3, 3, dyadic=False)
        b = random_symbol(r, 3, 3, dyadic=False)
        lhs = weyl_quantize(star(a, b), n)
        rhs = op_mul(weyl_quantize(a, n), weyl_quantize(b, n), warn=False)
        t = rhs.trusted
        scale = max(1.0, np.abs(rhs.interior(t)).max())
        worst = max(worst, np.abs(lhs.interior(t) - rhs.interior(t)).max() / scale)
    assoc_fail = 0
    for _ in range(50):
        a, b, c = (random_symbol(r, 3, 3) for _ in range(3))
        if star(star(a, b), c) != star(a, star(b, c)):
            assoc_fail += 1
    p, cos, sin = Sym.p(), Sym.cos(), Sym.sin()
    examples = (star(p, cos) == p * cos + 0.5j * sin and star(cos, p) == p * cos - 0.5j * sin)
    ok = worst < 1e-10 and assoc_fail == 0 and examples
    return CheckResult("5 star homomorphism", ok,
                       f"max rel err {worst:.1e} (tol 1e-10); associativity failures {assoc_fail}/50; "
                       f"p*cos / cos*p {'exact' if examples else 'WRONG'}")


def check_liouville():
    """Free rotor < 1e-10; pendulum trajectory < 1e-9; series convergence
    ratio < 1e-4."""
    grid = PhaseSpaceGrid(64, -4.0, 4.0, 161)
    free = PendulumModel.from_gamma(0.5)
    cal, misfit = calibrate_liouville_boundary(free, 0, 1, grid)
    derived = liouville_boundary_prefactor(free)
    res_a = liouville_residual(WaveFunction.from_modes({0: 1.0, 1: 1.0}, 2), free, grid).max_abs
    model = PendulumModel.from_gamma(0.5, amplitude=1.0)
    psi0 = WaveFunction.gaussian(32, center=1.0, width=2.0, angle=0.5)
    times = np.linspace(0.0, 1.0, 5)
    traj = evolve_schrodinger(psi0, times, model)
    res_b = liouville_residual(traj, model, grid).max_abs
    r2 = liouville_residual(traj[2], model, grid, n_series=2).max_abs
    r6 = liouville_residual(traj[2], model, grid, n_series=6).max_abs
    ratio = r6 / r2
    ok = (res_a < 1e-10 and res_b < 1e-9 and ratio < 1e-4
          and abs(cal - derived) < 1e-12 and misfit < 1e-12)
    return CheckResult("6 Liouville residual", ok,
                       f"(a) {res_a:.1e} (tol 1e-10), calibrated prefactor {cal:.6g} vs i hbar/I; "
                       f"(b) {res_b:.1e} (tol 1e-9); (c) ratio {ratio:.1e} (tol 1e-4)")


def check_diagonal_density():
    """Shift-form RHS matches the von Neumann oracle to 1e-9 at t = 0; the
    quantum side scales as hbar^2."""
    model = PendulumModel.from_gamma(0.5, amplitude=1.0)
    grid = PhaseSpaceGrid(64, -4.0, 4.0, 161)
    theta = grid.theta[1:]
    r = _rng(7)
    lam = r.random(11)
    # support |m| <= 5 inside the n_max = 8 window keeps the flow free of edge leakage
    rho = MoyalCoefficients.diagonal(dict(zip(range(-5, 6), lam / lam.sum())), 8)
    oracle = time_derivative_field(rho, model).grid(theta, grid.pbar)
    err = np.abs(oracle - diagonal_density_rhs(rho, model, theta, grid.pbar)).max()
    slope = hbar_scaling_slope(rho)
    ok = err < 1e-9 and abs(slope - 2.0) <= 0.1
    return CheckResult("7 diagonal density equation", ok,
                       f"oracle mismatch {err:.1e} (tol 1e-9); hbar exponent {slope:.3f} (2.0 +- 0.1)")


def hbar_scaling_slope(rho, hbars=None):
    """Log-log slope of the quantum side of the diagonal equation against
    hbar, with the momentum profile held fixed (built at hbar = 1)."""
    if hbars is None:
        hbars = np.geomspace(0.01, 0.1, 6)
    f = wigner_field(rho)
    profile = lambda p: np.real(f(0.0, p))
    dprofile = lambda p: np.real(f(0.0, p, p_order=1))
    theta = theta_grid(16)[1:]
    p = np.linspace(-4, 4, 161)
    norms = [np.abs(quantum_side_diagonal(profile, PendulumModel.from_gamma(0.5, 1.0, hbar=h),
                                          theta, p, dp=dprofile)).max() for h in hbars]
    return float(np.polyfit(np.log(hbars), np.log(norms), 1)[0])


def check_energy_equation():
    """Energy residual < 1e-8 for the four lowest eigenstates and three
    Moyal pairs; continuity to 1e-10; free-rotor eigenstates exact."""
    grid = PhaseSpaceGrid(64, -4.0, 4.0, 161)
    model = PendulumModel.from_gamma(0.5, amplitude=0.25)
    eig = eigensystem(model, 32)
    worst = max(energy_residual(eig.state(j), model, grid=grid).max_abs for j in range(4))
    pairs = [(0, 1), (1, 2), (0, 3)]
    worst_pair = max(energy_residual(eig.state(a), model, u2=eig.state(b), grid=grid).max_abs
                     for a, b in pairs)
    theta = np.linspace(-3.0, 3.0, 41)
    cont = 0.0
    for a, b in pairs:
        u2, u1 = eig.state(a), eig.state(b)
        cont = max(cont, continuity_residual(u2, u1, model, theta, 0.0, source=False).max(),
                   continuity_residual(u2, u1, model, theta, np.pi).max(),
                   continuity_residual(u2, u1, model, theta, -np.pi).max())
    free = PendulumModel.from_gamma(0.5)
    free_res = max(energy_residual(WaveFunction.basis(m, 4), free, grid=grid).max_abs
                   for m in range(-3, 4))
    cal, misfit = calibrate_energy_boundary(free, 2, grid)
    ok = worst < 1e-8 and worst_pair < 1e-8 and cont < 1e-10 and free_res < 1e-14 and misfit < 1e-12
    return CheckResult("8 energy equation", ok,
                       f"eigenstates {worst:.1e}, pairs {worst_pair:.1e} (tol 1e-8); continuity "
                       f"{cont:.1e} (tol 1e-10); free rotor {free_res:.1e}; boundary constant {cal.real:.6g}")


def check_recovery():
    """Round-trip fidelity 1 - 1e-8 for 20 random states with |psi(0)| > 0.1."""
    r = _rng(9)
    worst = 0.0
    done = 0
    while done < 20:
        psi = WaveFunction.random(3, r)
        if abs(evaluate(psi, 0.0)) <= 0.1:
            continue
        got = recover_wavefunction(lambda t, p, psi=psi: wigner_eval(psi, t, p), 3)
        worst = max(worst, 1 - abs(inner_product(got, psi)) ** 2)
        done += 1
    return CheckResult("9 wave-function recovery", worst < 1e-8,
                       f"worst infidelity {worst:.1e} over 20 states (tol 1e-8)")


def check_marginals_filter():
    """theta-marginal equals |psi|^2/2pi to 1e-12; the sinc filter returns
    |c_m|^2 to 1e-10."""
    r = _rng(10)
    theta = np.linspace(-np.pi, np.pi, 33)
    marg = filt = 0.0
    for _ in range(10):
        psi = WaveFunction.random(4, r)
        f = wigner_field(psi)
        marg = max(marg, np.abs(f.theta_marginal(theta) - np.abs(evaluate(psi, theta)) ** 2 / (2 * np.pi)).max())
        for m in psi.indices:
            filt = max(filt, abs(momentum_filter(psi, psi, m) - abs(psi.coefficient(m)) ** 2))
    ok = marg < 1e-12 and filt < 1e-10
    return CheckResult("10 marginals and filtering", ok,
                       f"theta-marginal {marg:.1e} (tol 1e-12); filter {filt:.1e} (tol 1e-10)")


def check_bloch_thermal():
    """Bloch residual is second order in the beta step; the thermal Wigner
    function is band-limited in theta and integrates to one."""
    model = PendulumModel.from_gamma(0.5, amplitude=1.0)
    n = 16
    h = 1e-2
    r1, r2 = bloch_residual(model, 1.0, h, n), bloch_residual(model, 1.0, h / 2, n)
    order = float(np.log2(r1 / r2))
    rho = thermal_state(model, 1.0, n)
    f = wigner_field(rho)
    band_ok = max(abs(k) for (k, _) in f.terms(1e-15)) <= 2 * n
    integral = f.integral().real
    theta = theta_grid(4 * n + 4)
    quad = pbar_quad(lambda x: theta_integrate(np.real(f.grid(theta, x)), axis=0), window=60.0).real
    ok = abs(order - 2.0) <= 0.1 and band_ok and abs(integral - 1) < 1e-12 and abs(quad - 1) < 1e-9
    return CheckResult("11 Bloch/thermal", ok,
                       f"Bloch order {order:.3f} (2.0 +- 0.1); band-limited {band_ok}; "
                       f"integral {integral:.15f}, quadrature {quad:.12f}")


ACCEPTANCE = [
    check_kernel_orthogonality,
    check_normalization_purity,
    check_symbol_table,
    check_round_trips,
    check_star_homomorphism,
    check_liouville,
    check_diagonal_density,
    check_energy_equation,
    check_recovery,
    check_marginals_filter,
    check_bloch_thermal,
]


# ---------------------------------------------------------------------------
# supplementary invariants
# ---------------------------------------------------------------------------

@_quiet
def check_lie_algebra():
    """[L, C] = i hbar S and [L, S] = -i hbar C on the interior."""
    n, hbar = 6, 0.7
    L = standard_operator("L", n, hbar=hbar)
    C, S = standard_operator("C", n), standard_operator("S", n)
    a = commutator(L, C)
    b = commutator(L, S)
    r = a.trusted
    err = max(np.abs(a.interior(r) - 1j * hbar * S.interior(r)).max(),
              np.abs(b.interior(r) + 1j * hbar * C.interior(r)).max())
    return CheckResult("Lie algebra of L, C, S", err < 1e-14, f"max err {err:.1e}")


def check_moyal_oracle():
    """Moyal functions: kernel sum versus direct quadrature of the defining
    integral, and hermiticity."""
    r = _rng(12)
    psi2, psi1 = WaveFunction.random(5, r), WaveFunction.random(5, r)
    t, p = r.uniform(-np.pi, np.pi, 50), r.uniform(-6, 6, 50)
    from .kernel import moyal_eval_quadrature
    err = np.abs(moyal_eval(psi2, psi1, t, p) - moyal_eval_quadrature(psi2, psi1, t, p)).max()
    herm = np.abs(moyal_eval(psi2, psi1, t, p) - np.conj(moyal_eval(psi1, psi2, t, p))).max()
    return CheckResult("Moyal kernel vs quadrature", err < 1e-10 and herm < 1e-15,
                       f"quadrature {err:.1e}; hermiticity {herm:.1e}")


def check_sesquilinear_overlap():
    """int int conj(V_21) V_43 = (psi1, psi3) conj((psi2, psi4)) / 2pi."""
    r = _rng(13)
    worst = 0.0
    for _ in range(20):
        p1, p2, p3, p4 = (WaveFunction.random(4, r) for _ in range(4))
        lhs = ShiftedSincField.from_moyal(p2, p1).inner(ShiftedSincField.from_moyal(p4, p3))
        rhs = inner_product(p1, p3) * np.conj(inner_product(p2, p4)) / (2 * np.pi)
        worst = max(worst, abs(lhs - rhs))
    return CheckResult("sesquilinear overlap", worst < 1e-12, f"max err {worst:.1e}")


def check_sinc_moment():
    """Moment rule against the Gaussian-regularized oracle."""
    cases = [(0, 1.0), (2, 2.0), (1, 0.5), (3, -1.5)]
    worst = max(abs(sinc_moment_regularized(j, s) - sinc_moment(j, s)) / max(1.0, abs(s) ** j)
                for j, s in cases)
    return CheckResult("sinc moment oracle", worst < 1e-6, f"max rel err {worst:.1e}")


def check_commutator_parity():
    """Commutator has only odd powers of hbar, anticommutator only even."""
    r = _rng(14)
    ok = True
    for _ in range(10):
        a, b = random_symbol(r, 2, 3), random_symbol(r, 2, 3)
        com = commutator_expansion(a, b, 7)
        anti = anticommutator_expansion(a, b, 7)
        ok &= all(c.is_zero() for c in com[0::2]) and all(c.is_zero() for c in anti[1::2])
    return CheckResult("star commutator parity", ok, "odd/even hbar split")


SUITES = {
    "kernel": [check_kernel_orthogonality, check_normalization_purity, check_recovery,
               check_marginals_filter, check_moyal_oracle, check_sesquilinear_overlap],
    "weyl": [check_lie_algebra, check_symbol_table, check_round_trips, check_sinc_moment],
    "star": [check_star_homomorphism, check_commutator_parity],
    "dynamics": [check_liouville, check_diagonal_density, check_energy_equation,
                 check_bloch_thermal],
    "acceptance": ACCEPTANCE,
}
SUITES["all"] = list(dict.fromkeys(fn for name in ("kernel", "weyl", "star", "dynamics", "acceptance")
                                   for fn in SUITES[name]))


def run_suite(name):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [fn() for fn in SUITES[name]]
