"""Expression parsing for polynomials and rational functions.

Grammar: integers, rationals a/b, the imaginary unit i, variables from an
explicit allowed set, + - * / ^ with integer exponents, and parentheses.
Every literal is exact; '/' yields a rational function, which callers can
reject via parse_polynomial.
"""

from __future__ import annotations

from .algebra import GaussianRational, RationalFunction, SparsePoly
from .errors import ExpressionSyntaxError, NonPolynomial

_TOKEN_OPS = set("+-*/^()")


class _Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos


def _tokenize(text: str):
    tokens = []
    k = 0
    n = len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
            continue
        if ch in _TOKEN_OPS:
            tokens.append(_Token(ch, ch, k))
            k += 1
            continue
        if ch.isdigit():
            start = k
            while k < n and text[k].isdigit():
                k += 1
            tokens.append(_Token("int", int(text[start:k]), start))
            continue
        if ch.isalpha() or ch == "_":
            start = k
            while k < n and (text[k].isalnum() or text[k] == "_"):
                k += 1
            tokens.append(_Token("name", text[start:k], start))
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", k)
    tokens.append(_Token("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.k = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.k]

    def advance(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok.kind != kind:
            raise ExpressionSyntaxError(f"expected {kind!r}, found {tok.value!r}", tok.pos)
        return tok

    # expr := term (('+'|'-') term)*
    def expr(self):
        value = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.kind == "+" else value - rhs
        return value

    # term := unary (('*'|'/') unary)*
    def term(self):
        value = self.unary()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.kind == "*":
                value = value * rhs
            else:
                if isinstance(rhs, RationalFunction):
                    if rhs.is_zero:
                        raise ExpressionSyntaxError("division by zero", op.pos)
                    value = value / rhs
                else:
                    raise ExpressionSyntaxError("bad divisor", op.pos)
        return value

    # unary := '-' unary | power
    def unary(self):
        if self.peek().kind == "-":
            self.advance()
            return -self.unary()
        if self.peek().kind == "+":
            self.advance()
            return self.unary()
        return self.power()

    # power := atom ('^' signed_int)?
    def power(self):
        base = self.atom()
        if self.peek().kind == "^":
            self.advance()
            sign = 1
            while self.peek().kind in ("+", "-"):
                if self.advance().kind == "-":
                    sign = -sign
            tok = self.expect("int")
            e = sign * tok.value
            if e >= 0:
                return base ** e
            if base.is_zero:
                raise ExpressionSyntaxError("zero to a negative power", tok.pos)
            return base ** e
        return base

    def atom(self):
        tok = self.advance()
        if tok.kind == "int":
            return RationalFunction.of(
                GaussianRational(tok.value), self.variables
            )
        if tok.kind == "name":
            if tok.value == "i":
                return RationalFunction.of(GaussianRational(0, 1), self.variables)
            if tok.value in self.variables:
                return RationalFunction(
                    SparsePoly.variable(tok.value, self.variables), reduce=False
                )
            raise ExpressionSyntaxError(f"unknown variable {tok.value!r}", tok.pos)
        if tok.kind == "(":
            value = self.expr()
            closing = self.advance()
            if closing.kind != ")":
                raise ExpressionSyntaxError("missing closing parenthesis", closing.pos)
            return value
        raise ExpressionSyntaxError(f"unexpected token {tok.value!r}", tok.pos)


def parse_rational(text: str, variables=("x", "y")) -> RationalFunction:
    """Exact parse into a rational function over the allowed variables."""
    parser = _Parser(_tokenize(text), variables)
    value = parser.expr()
    end = parser.advance()
    if end.kind != "end":
        raise ExpressionSyntaxError(f"trailing input {end.value!r}", end.pos)
    return value


def parse_polynomial(text: str, variables=("x", "y")) -> SparsePoly:
    """Exact parse; rejects expressions that stay rational after reduction."""
    value = parse_rational(text, variables)
    if not value.is_polynomial:
        raise NonPolynomial(f"{text!r} reduces to a quotient, not a polynomial")
    return value.as_polynomial().with_variables(variables)
