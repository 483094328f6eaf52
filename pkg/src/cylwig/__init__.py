"""Wigner functions, Weyl symbols and star products on the cylinder S^1 x R.

Set ``CYLWIG_THREADS`` before import to cap BLAS/OpenMP threads.
"""

import os as _os

_threads = _os.environ.get("CYLWIG_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .basis import (BandedOperator, PendulumModel, PhysicalConstants, TruncationWarning,  # noqa: E402
                    WaveFunction, anticommutator, commutator, inner_product, op_mul,
                    standard_operator)
from .field import ShiftedSincField  # noqa: E402
from .kernel import (DegenerateAnchorError, MoyalCoefficients, PhaseSpaceGrid,  # noqa: E402
                     kernel, marginals, momentum_filter, moyal_eval, overlap, purity,
                     recover_wavefunction, wigner_eval, wigner_from_density)
from .symbols import PhaseSpaceSymbol  # noqa: E402
from .weyl import weyl_quantize, weyl_symbol  # noqa: E402
from .star import hbar_expansion, star, star_anticommutator, star_commutator  # noqa: E402
from .parser import SymbolSyntaxError, format_symbol, parse_symbol  # noqa: E402
from .dynamics import (EigenSystem, PreconditionError, eigensystem, energy_residual,  # noqa: E402
                       evolve_density, evolve_schrodinger, liouville_residual, thermal_state)

__version__ = "0.1.0"

__all__ = [
    "BandedOperator", "PendulumModel", "PhysicalConstants", "TruncationWarning", "WaveFunction",
    "anticommutator", "commutator", "inner_product", "op_mul", "standard_operator",
    "ShiftedSincField", "DegenerateAnchorError", "MoyalCoefficients", "PhaseSpaceGrid", "kernel",
    "marginals", "momentum_filter", "moyal_eval", "overlap", "purity", "recover_wavefunction",
    "wigner_eval", "wigner_from_density", "PhaseSpaceSymbol", "weyl_quantize", "weyl_symbol",
    "hbar_expansion", "star", "star_anticommutator", "star_commutator", "SymbolSyntaxError",
    "format_symbol", "parse_symbol", "EigenSystem", "PreconditionError", "eigensystem",
    "energy_residual", "evolve_density", "evolve_schrodinger", "liouville_residual",
    "thermal_state",
]
