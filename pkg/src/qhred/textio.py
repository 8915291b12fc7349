"""Tokenizer and recursive-descent parser for the ASCII expression grammar.

The same grammar covers scalars, fields and lambda-polynomials::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := primary ("^" exponent)?
    primary := NUMBER | NAME | "(" expr ")" | "sqrt(" expr ")"
             | "d(" expr ")" | "d^" NUMBER "(" expr ")" | ":" factor+ ":"

A normal product ``:A B C:`` is right nested, ``:A :B C::``.  Nested normal
products inside a product must be parenthesised.  What a name means is
decided by a :class:`Namespace`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .errors import ParseError
from .scalars import VARIABLES, Scalar, radical, sqrt_rational

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^():\[\]=,_]))"
)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 10]!r} at {pos}")
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class Namespace:
    """Resolves names and field operations for the parser.

    The base namespace knows only scalar symbols.  Field namespaces override
    :meth:`lookup`, :meth:`nprod`, :meth:`derive` and may supply ``lambda``.
    """

    def lookup(self, name: str) -> Any:
        if name in VARIABLES:
            return Scalar.var(name)
        try:
            r = radical(name)
        except KeyError:
            raise ParseError(f"unknown name {name!r}") from None
        return Scalar.rad(r.name)

    def nprod(self, a: Any, b: Any) -> Any:
        raise ParseError("normal products are not allowed here")

    def derive(self, a: Any, n: int) -> Any:
        raise ParseError("derivatives are not allowed here")


SCALARS = Namespace()


class Parser:
    def __init__(self, text: str, ns: Namespace = SCALARS):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.ns = ns

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t.kind == "op" and t.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            t = self.peek()
            raise ParseError(f"expected {text!r} at {t.pos} in {self.text!r}, found {t.text!r}")

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    # grammar
    def parse(self) -> Any:
        v = self.expr()
        if not self.at_end():
            t = self.peek()
            raise ParseError(f"trailing input at {t.pos} in {self.text!r}")
        return v

    def expr(self) -> Any:
        v = self.term()
        while True:
            if self.accept("+"):
                v = v + self.term()
            elif self.accept("-"):
                v = v - self.term()
            else:
                return v

    def term(self) -> Any:
        v = self.unary()
        while True:
            if self.accept("*"):
                w = self.unary()
                v = _mul(v, w)
            elif self.accept("/"):
                w = self.unary()
                if not isinstance(w, Scalar):
                    raise ParseError("can only divide by scalars")
                v = v * (1 / w) if isinstance(v, Scalar) else v * w.inverse()
            else:
                return v

    def unary(self) -> Any:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Any:
        base = self.primary()
        if self.accept("^"):
            neg = self.accept("-")
            if self.accept("("):
                e = self.expr()
                self.expect(")")
                if not isinstance(e, Scalar) or not e.is_rational() or e.to_fraction().denominator != 1:
                    raise ParseError("exponent must be an integer")
                n = int(e.to_fraction())
            else:
                t = self.next()
                if t.kind != "num":
                    raise ParseError(f"expected integer exponent at {t.pos}")
                n = int(t.text)
            if neg:
                n = -n
            return base**n
        return base

    def _call_arg(self) -> Any:
        self.expect("(")
        v = self.expr()
        self.expect(")")
        return v

    def primary(self) -> Any:
        t = self.peek()
        if t.kind == "num":
            self.next()
            return Scalar(int(t.text))
        if t.kind == "op" and t.text == "(":
            return self._call_arg()
        if t.kind == "op" and t.text == ":":
            self.next()
            factors = []
            while not self.accept(":"):
                if self.at_end():
                    raise ParseError(f"unterminated normal product in {self.text!r}")
                factors.append(self.factor())
            if not factors:
                raise ParseError("empty normal product")
            v = factors[-1]
            for f in reversed(factors[:-1]):
                v = self.ns.nprod(f, v)
            return v
        if t.kind == "name":
            return self.name_or_call()
        raise ParseError(f"unexpected token {t.text!r} at {t.pos} in {self.text!r}")

    def factor(self) -> Any:
        t = self.peek()
        if t.kind == "name":
            return self.name_or_call()
        if t.kind == "op" and t.text == "(":
            return self._call_arg()
        raise ParseError(f"unexpected token {t.text!r} inside normal product at {t.pos}")

    def name_or_call(self) -> Any:
        t = self.next()
        if t.text == "d":
            n = 1
            if self.accept("^"):
                e = self.next()
                if e.kind != "num":
                    raise ParseError("expected derivative order")
                n = int(e.text)
            return self.ns.derive(self._call_arg(), n)
        if t.text == "sqrt":
            v = self._call_arg()
            if not isinstance(v, Scalar) or not v.is_rational():
                raise ParseError("sqrt takes a rational argument")
            return sqrt_rational(v.to_fraction())
        return self.ns.lookup(t.text)


def _mul(v: Any, w: Any) -> Any:
    if isinstance(v, Scalar) and isinstance(w, Scalar):
        return v * w
    if isinstance(v, Scalar):
        return w.__rmul__(v)
    return v * w


def parse_scalar(text: str) -> Scalar:
    v = Parser(text).parse()
    if not isinstance(v, Scalar):
        raise ParseError(f"{text!r} is not a scalar")
    return v


def parse_with(text: str, ns: Namespace) -> Any:
    return Parser(text, ns).parse()


def parse_fraction(text: str) -> Fraction:
    s = parse_scalar(text)
    if not s.is_rational():
        raise ParseError(f"{text!r} is not rational")
    return s.to_fraction()


def needs_parens(s: str) -> bool:
    """True when a rendered coefficient must be bracketed before ``*word``."""
    body = s[1:] if s.startswith("-") else s
    depth = 0
    for ch_i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and ch_i > 0:
            return True
        elif depth == 0 and ch == "/":
            return True
    return False


RenderFn = Callable[[Any], str]
