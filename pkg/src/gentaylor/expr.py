"""Expression syntax trees, a recursive-descent parser and a serializer.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | 'x' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)`` while ``2^-x`` is ``2^(-x)``.  NUMBER is a decimal with an
optional exponent, or a rational literal ``p/q`` written without spaces;
``x^1/2`` is therefore ``x^(1/2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ExprSyntaxError

FUNCTIONS = ("sin", "cos", "tan", "atan", "exp", "log", "sqrt", "sinh", "cosh", "neg")
CONSTANTS = ("pi", "e")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Var, Const, Neg, Call, BinOp]


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rational>\d+/\d+(?![\d.eE]))
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExprSyntaxError(_byte_offset(text, pos), "a number, 'x', a name or '('", text)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(_Token("eof", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, expected: str):
        raise ExprSyntaxError(self.tok.offset, expected, self.text)

    def accept(self, *ops: str) -> str | None:
        if self.tok.kind == "op" and self.tok.text in ops:
            self.pos += 1
            return self.tokens[self.pos - 1].text
        return None

    def expect(self, op: str) -> None:
        if self.accept(op) is None:
            self.fail(op)

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            self.fail("an operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while (op := self.accept("*", "/")) is not None:
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.accept("-") is not None:
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^") is not None:
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "rational":
            p, q = tok.text.split("/")
            if int(q) == 0:
                self.fail("a nonzero denominator")
            self.pos += 1
            return Num(Fraction(int(p), int(q)))
        if tok.kind == "number":
            self.pos += 1
            return Num(Fraction(tok.text))
        if tok.kind == "name":
            self.pos += 1
            if tok.text == "x":
                return Var()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text not in FUNCTIONS:
                self.pos -= 1
                self.fail(f"a function name ({', '.join(FUNCTIONS)}) or x, pi, e")
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Neg(arg) if tok.text == "neg" else Call(tok.text, arg)
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, 'x', a name or '('")


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises ExprSyntaxError."""
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    if isinstance(node, Num) and node.value < 0:
        return 0
    return _PREC["atom"]


def to_text(node: Expr) -> str:
    """Serialize with the minimum parentheses needed to re-parse to the same tree."""
    if isinstance(node, Num):
        v = node.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f"({s})" if v < 0 else s
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        if _prec(node.arg) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[node.op]
    left, right = to_text(node.left), to_text(node.right)
    if node.op == "^":
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < _PREC["neg"]:
            right = f"({right})"
    else:
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
    return f"{left} {node.op} {right}"


def has_var(node: Expr) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, (Neg, Call)):
        return has_var(node.arg)
    if isinstance(node, BinOp):
        return has_var(node.left) or has_var(node.right)
    return False


def constant_value(text_or_node, domain):
    """Value of a closed expression (no ``x``) such as ``"1/3"`` or ``"pi/2"``."""
    from .jet import jet_eval

    node = parse(text_or_node) if isinstance(text_or_node, str) else text_or_node
    if has_var(node):
        raise ValueError("constant expression must not contain x")
    from .scalar import lift

    return jet_eval(node, lift(0, domain), 0).coeffs[0]
