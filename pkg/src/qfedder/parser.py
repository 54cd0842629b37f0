"""Recursive-descent parser for polynomial expressions, and the inverse formatter.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := signed ('*' signed)*
    signed := '-' signed | factor
    factor := base ('^' uint)?
    base   := var | uint | '(' expr ')'

Juxtaposition is not multiplication: ``xy`` is a single (probably unknown)
variable name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .config import RingConfig
from .modpoly import MAX_EXPONENT, ModPoly, grlex_key, mul, pow

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST nodes. Evaluation happens directly mod p^W, which commutes with reduction from Z.

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def eat(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self):
        if self.tok.kind == "end":
            raise ParseError("empty input", 0)
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected token {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.signed()
        while self.eat("*"):
            node = BinOp("*", node, self.signed())
        return node

    def signed(self):
        if self.eat("-"):
            return Neg(self.signed())
        return self.factor()

    def factor(self):
        node = self.base()
        if self.eat("^"):
            tok = self.tok
            if tok.kind != "num":
                raise ParseError("exponent must be a non-negative integer literal", tok.pos)
            exp = int(tok.text)
            if exp > MAX_EXPONENT:
                raise ParseError(f"exponent {exp} exceeds 2^32", tok.pos)
            self.i += 1
            node = Pow(node, exp)
        return node

    def base(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            return Var(tok.text, tok.pos)
        if self.eat("("):
            node = self.expr()
            if not self.eat(")"):
                raise ParseError("expected ')'", self.tok.pos)
            return node
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def parse_expr(text: str):
    """Parse ``text`` into an AST (no ring needed)."""
    return _Parser(text).parse()


def _eval(node, cfg: RingConfig) -> ModPoly:
    if isinstance(node, Num):
        return ModPoly.const(cfg, node.value)
    if isinstance(node, Var):
        if node.name not in cfg.vars:
            raise ParseError(f"unknown variable {node.name!r}", node.pos)
        return ModPoly.var(cfg, node.name)
    if isinstance(node, Neg):
        return -_eval(node.arg, cfg)
    if isinstance(node, Pow):
        return pow(_eval(node.base, cfg), node.exp)
    left, right = _eval(node.left, cfg), _eval(node.right, cfg)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    return mul(left, right)


def parse_poly(text: str, cfg: RingConfig) -> ModPoly:
    """Parse a polynomial with integer coefficients and reduce it mod p^W."""
    return _eval(parse_expr(text), cfg)


def format_monomial(exps, names) -> str:
    parts = []
    for name, x in zip(names, exps):
        if x == 1:
            parts.append(name)
        elif x > 1:
            parts.append(f"{name}^{x}")
    return "*".join(parts) or "1"


def format_poly(g: ModPoly) -> str:
    """Terms in descending graded-lex order, e.g. ``3*x*y + z^2 + 1``."""
    if g.is_zero():
        return "0"
    out = []
    for e, c in sorted(g.items(), key=lambda t: grlex_key(t[0]), reverse=True):
        mono = format_monomial(e, g.cfg.vars)
        if mono == "1":
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)
