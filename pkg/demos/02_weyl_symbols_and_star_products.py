"""Weyl symbols and the star product on the cylinder.

Operators built from cos(phi), sin(phi) and the angular momentum L have
polynomial-in-p symbols.  Products of operators map to the star product of
their symbols, which on the cylinder reduces to momentum shifts of each
Fourier mode.

Run:  python demos/02_weyl_symbols_and_star_products.py
"""

import warnings

import numpy as np

from cylwig import (PendulumModel, TruncationWarning, format_symbol, hbar_expansion, op_mul,
                    parse_symbol, standard_operator, star, star_commutator, weyl_quantize,
                    weyl_symbol)

warnings.simplefilter("ignore", TruncationWarning)
n = 10

# Dequantize the elementary operators.
for name in ("C", "S", "L", "L2"):
    print(f"{name:>3} -> {format_symbol(weyl_symbol(standard_operator(name, n)))}")
model = PendulumModel.from_gamma(0.5, amplitude=1.0)
print(f"  H -> {format_symbol(weyl_symbol(standard_operator('H', n, model=model)))}")

# Products of operators pick up quantum corrections.
ell, cos = standard_operator("L", n), standard_operator("C", n)
print("\nL C      ->", format_symbol(weyl_symbol(op_mul(ell, cos))))
print("[L, C]   ->", format_symbol(weyl_symbol(op_mul(ell, cos) - op_mul(cos, ell))))

# The same results straight from the symbols.
p, c = parse_symbol("p").to_symbol(), parse_symbol("cos(t)").to_symbol()
print("\np * cos    =", format_symbol(star(p, c)))
print("[p, cos]_* =", format_symbol(star_commutator(p, c)))

# The hbar expansion terminates; the first order is the Poisson bracket / 2i.
a, b = parse_symbol("p^2*cos(t)").to_symbol(), parse_symbol("p*sin(2t)").to_symbol()
for r, term in enumerate(hbar_expansion(a, b, 3)):
    print(f"hbar^{r}: {format_symbol(term)}")

# Quantization is a homomorphism on the interior of the basis window.
lhs = weyl_quantize(star(a, b), n)
rhs = op_mul(weyl_quantize(a, n), weyl_quantize(b, n))
r = rhs.trusted
print(f"\nmax |Q(a*b) - Q(a)Q(b)| on |m|,|n| <= {r}:",
      np.abs(lhs.interior(r) - rhs.interior(r)).max())
