"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a single ``PASS``/``FAIL`` line (visible with ``pytest -s``
or in the summary produced by ``cylwig check --suite acceptance``).
"""

import pytest

from cylwig.checks import (check_bloch_thermal, check_diagonal_density, check_energy_equation,
                           check_kernel_orthogonality, check_liouville, check_marginals_filter,
                           check_normalization_purity, check_recovery, check_round_trips,
                           check_star_homomorphism, check_symbol_table)

CRITERIA = [
    ("01_kernel_orthogonality", check_kernel_orthogonality),
    ("02_normalization_purity", check_normalization_purity),
    ("03_weyl_symbol_table", check_symbol_table),
    ("04_quantization_round_trips", check_round_trips),
    ("05_star_homomorphism", check_star_homomorphism),
    ("06_liouville_residual", check_liouville),
    ("07_diagonal_density", check_diagonal_density),
    ("08_energy_equation", check_energy_equation),
    ("09_recovery", check_recovery),
    ("10_marginals_filtering", check_marginals_filter),
    ("11_bloch_thermal", check_bloch_thermal),
]


@pytest.mark.parametrize("label,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(label, check, capsys):
    result = check()
    with capsys.disabled():
        print(f"\n[{label}] {result.line()}")
    assert result.passed, result.line()
