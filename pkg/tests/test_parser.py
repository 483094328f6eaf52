import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylwig.checks import random_symbol
from cylwig.parser import (SymbolExpression, SymbolSyntaxError, Term, format_expression,
                           format_symbol, parse_symbol)
from cylwig.symbols import PhaseSpaceSymbol as Sym


def test_single_power():
    expr = parse_symbol("p^2")
    assert expr.terms == (Term.make(1.0, 2),)


def test_two_terms():
    expr = parse_symbol("p*cos(t) + 0.5*sin(2t)")
    assert set(expr.terms) == {Term.make(1.0, 1, "cos", 1), Term.make(0.5, 0, "sin", 2)}


def test_complex_coefficient():
    expr = parse_symbol("(0,0.5)*sin(t)")
    assert expr.terms == (Term.make(0.5j, 0, "sin", 1),)
    assert expr.to_symbol() == Sym.sin(1, 0.5j)


def test_like_terms_merge_and_cancel():
    assert parse_symbol("p + 2*p - 3 * p").terms == ()
    assert parse_symbol(" cos( 3t )+cos(3t)").terms == (Term.make(2.0, 0, "cos", 3),)


def test_cos_zero_is_constant():
    assert parse_symbol("2*cos(0t)").to_symbol() == Sym.constant(2.0)


@pytest.mark.parametrize("text,offset", [("sin(0t)", 0), ("p +", 3), ("p ** 2", 3), ("", 0),
                                         ("3*", 2), ("cos(t", 5), ("é + p", 0)])
def test_syntax_errors_report_byte_offsets(text, offset):
    with pytest.raises(SymbolSyntaxError) as info:
        parse_symbol(text)
    assert info.value.offset == offset


def test_byte_offset_counts_utf8():
    with pytest.raises(SymbolSyntaxError) as info:
        parse_symbol("p + é")
    assert info.value.offset == 4
    with pytest.raises(SymbolSyntaxError) as info:
        parse_symbol("p + 1 é")
    assert info.value.offset == 6


def test_symbol_text_round_trip():
    sym = Sym.p(2, 0.5) - Sym.cos(1) + Sym.sin(3, 0.25j) + Sym.p(1) * Sym.cos(2, -1.5)
    assert parse_symbol(format_symbol(sym)).to_symbol().allclose(sym, atol=1e-15)


def test_round_trip_corpus_of_1000():
    rng = np.random.default_rng(2024)
    for i in range(1000):
        sym = random_symbol(rng, max_mode=3, max_degree=4, dyadic=(i % 2 == 0))
        expr = SymbolExpression.from_symbol(sym)
        again = parse_symbol(format_expression(expr))
        assert again == expr, format_expression(expr)


_coef = st.one_of(st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: x != 0),
                  st.builds(complex, st.floats(-10, 10), st.floats(-10, 10)))


@given(st.lists(st.tuples(_coef, st.integers(0, 6), st.sampled_from([None, "cos", "sin"]),
                          st.integers(1, 9)), max_size=8))
@settings(max_examples=300, deadline=None)
def test_print_parse_identity(items):
    expr = SymbolExpression.from_terms(Term.make(c, j, trig, k) for c, j, trig, k in items)
    assert parse_symbol(format_expression(expr)) == expr


def test_format_zero():
    assert format_symbol(Sym()) == "0"
    assert parse_symbol("0").terms == ()
