"""Text syntax for phase-space symbols.

Grammar (whitespace is ignored)::

    expr := ['-'] term (('+' | '-') term)*
    term := [coef '*'] ['p' ['^' int]] ['*'] [('cos' | 'sin') '(' [int] 't' ')']
    coef := float | '(' float ',' float ')'

``t`` is the angle; ``(re,im)`` is a complex coefficient.  Example:
``p*cos(t) + (0,0.5)*sin(t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .symbols import PhaseSpaceSymbol

__all__ = ["SymbolSyntaxError", "Term", "SymbolExpression", "parse_symbol", "format_symbol",
           "format_number"]


class SymbolSyntaxError(ValueError):
    """Malformed symbol text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, text, index):
        self.offset = len(text[:index].encode("utf-8"))
        self.text = text
        super().__init__(f"{message} at byte {self.offset}")


_TRIG_ORDER = {None: 0, "cos": 1, "sin": 2}


@dataclass(frozen=True, order=True)
class Term:
    """coefficient * p^p_power * trig(mode t); trig None means no angle factor."""

    mode: int
    trig_rank: int
    p_power: int
    coefficient: complex = 0j

    @property
    def trig(self):
        return {0: None, 1: "cos", 2: "sin"}[self.trig_rank]

    @classmethod
    def make(cls, coefficient, p_power=0, trig=None, mode=0):
        if trig == "cos" and mode == 0:
            trig = None
        if trig is None:
            mode = 0
        return cls(int(mode), _TRIG_ORDER[trig], int(p_power), complex(coefficient))


@dataclass(frozen=True)
class SymbolExpression:
    """Normalized list of terms: like terms merged, zeros dropped, sorted by
    mode, then none/cos/sin, then power of p."""

    terms: tuple

    @classmethod
    def from_terms(cls, terms):
        merged = {}
        for t in terms:
            key = (t.mode, t.trig_rank, t.p_power)
            merged[key] = merged.get(key, 0j) + t.coefficient
        out = tuple(Term(*key, c) for key, c in sorted(merged.items()) if c != 0)
        return cls(out)

    def to_symbol(self):
        return PhaseSpaceSymbol.from_trig_terms(
            (t.coefficient, t.p_power, t.trig, t.mode) for t in self.terms)

    @classmethod
    def from_symbol(cls, sym):
        return cls.from_terms(Term.make(c, j, trig, k) for c, j, trig, k in sym.trig_terms())

    def __str__(self):
        return format_expression(self)


_FLOAT = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.i = 0

    def error(self, message, index=None):
        raise SymbolSyntaxError(message, self.text, self.i if index is None else index)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self, token):
        self.skip()
        return self.text.startswith(token, self.i)

    def accept(self, token):
        if self.peek(token):
            self.i += len(token)
            return True
        return False

    def expect(self, token):
        if not self.accept(token):
            self.error(f"expected {token!r}")

    def number(self, signed=False):
        self.skip()
        m = _FLOAT.match(self.text, self.i)
        if not m or (not signed and m.group(0)[0] in "+-"):
            self.error("expected a number")
        self.i = m.end()
        return float(m.group(0))

    def integer(self):
        self.skip()
        m = _INT.match(self.text, self.i)
        if not m:
            self.error("expected an integer")
        self.i = m.end()
        return int(m.group(0))

    def coefficient(self):
        """coef, or None when the term does not start with one."""
        self.skip()
        start = self.i
        if self.accept("("):
            re_part = self.number(signed=True)
            self.expect(",")
            im_part = self.number(signed=True)
            self.expect(")")
            return complex(re_part, im_part)
        if _FLOAT.match(self.text, start) and self.text[start] not in "+-":
            return self.number()
        return None

    def term(self):
        self.skip()
        start = self.i
        coef = self.coefficient()
        has_coef = coef is not None
        if has_coef and not self.peek("*"):
            # a bare coefficient is a complete term
            return Term.make(coef)
        if has_coef:
            self.expect("*")
        power, has_p = 0, False
        if self.accept("p"):
            has_p = True
            power = 1
            if self.accept("^"):
                power = self.integer()
            self.accept("*")
        trig, mode = None, 0
        for name in ("cos", "sin"):
            if self.peek(name):
                trig_at = self.i
                self.i += 3
                self.expect("(")
                self.skip()
                mode = self.integer() if _INT.match(self.text, self.i) else 1
                self.expect("t")
                self.expect(")")
                trig = name
                if name == "sin" and mode == 0:
                    self.error("sin(0t) is not allowed", trig_at)
                break
        if not has_p and trig is None:
            self.error("expected a coefficient, 'p' or a trig factor", start if not has_coef else None)
        return Term.make(1.0 if coef is None else coef, power, trig, mode)

    def expression(self):
        terms = []
        sign = -1.0 if self.accept("-") else 1.0
        while True:
            t = self.term()
            terms.append(Term(t.mode, t.trig_rank, t.p_power, sign * t.coefficient))
            self.skip()
            if self.i >= len(self.text):
                break
            if self.accept("+"):
                sign = 1.0
            elif self.accept("-"):
                sign = -1.0
            else:
                self.error("expected '+', '-' or end of input")
        return SymbolExpression.from_terms(terms)


def parse_symbol(text):
    """Parse symbol text into a normalized SymbolExpression.

    Raises
    ------
    SymbolSyntaxError
        With the byte offset of the first offending character.
    """
    if not text.strip():
        raise SymbolSyntaxError("empty expression", text, 0)
    return _Parser(text).expression()


def format_number(x):
    """Shortest repr; integral values without a trailing '.0'."""
    x = float(x)
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _format_term(t, first):
    c = t.coefficient
    if c.imag == 0:
        value = c.real
        sign = "-" if value < 0 else "+"
        mag = abs(value)
        coef = None if mag == 1 else format_number(mag)
    else:
        sign, coef = "+", f"({format_number(c.real)},{format_number(c.imag)})"
    factors = []
    if t.p_power == 1:
        factors.append("p")
    elif t.p_power > 1:
        factors.append(f"p^{t.p_power}")
    if t.trig is not None:
        factors.append(f"{t.trig}({'' if t.mode == 1 else t.mode}t)")
    if coef is not None:
        factors.insert(0, coef)
    body = "*".join(factors) if factors else "1"
    if first:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def format_expression(expr):
    if not expr.terms:
        return "0"
    return "".join(_format_term(t, i == 0) for i, t in enumerate(expr.terms))


def format_symbol(sym):
    """Text form of a PhaseSpaceSymbol (cos before sin within each mode)."""
    return format_expression(SymbolExpression.from_symbol(sym))
