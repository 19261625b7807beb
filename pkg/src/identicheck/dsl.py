"""A small declarative language for series/product identities.

A corpus file is a sequence of ``identity`` blocks::

    identity "eq10" {
      lhs = prod(k, 1..inf, 1 - (-1)^k / (2*k + 1));
      rhs = pi * sqrt(2) / 4;
      expect = true >= 8 digits;
    }

Grammar (EBNF; ``#`` starts a comment running to end of line)::

    corpus      := { identity }
    identity    := "identity" STRING "{"
                       "lhs" "=" expr ";"
                       "rhs" "=" expr ";"
                       [ "param" IDENT "in" INT ".." INT ";" ]
                       "expect" "=" expectation ";"
                   "}"
    expectation := "true" [ ">=" INT "digits" ] | "false"
    expr        := additive
    additive    := mult { ("+" | "-") mult }
    mult        := unary { ("*" | "/") unary }
    unary       := [ "-" ] postfix
    postfix     := atom { "^" unary | "!" }
    atom        := NUMBER | IDENT | IDENT "(" expr { "," expr } ")"
                 | bigop | "(" expr ")"
    bigop       := ("sum" | "prod") "(" IDENT "," domain "," expr ")"
    domain      := INT ".." ("inf" | INT) | "odd_primes"

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
means ``-(x^2)`` and ``2^-3`` is legal.  Built-in names: the constant ``pi``
and the functions ``sqrt``, ``cosh``, ``abs``, ``euler`` (Euler number E_n),
``bernoulli_hist`` (historical Bernoulli number, |B_{2m}| as a rational) and
``chi4`` (the quadratic character mod 4, only meaningful on an odd-primes
index).  NUMBER is an integer or a decimal literal; decimals become exact
rationals and are canonically printed as fractions.

Parsing reports 1-based line/column positions.  ``parse_corpus`` also
validates: unique identity names, every variable bound (by ``param`` or an
enclosing big operator), ``chi4`` applied only to an odd-primes index
variable, integer-valued arguments for ``!``/``euler``/``bernoulli_hist``,
and ordered ranges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Union

__all__ = [
    "Abs",
    "Add",
    "BernoulliHist",
    "BigProd",
    "BigSum",
    "Chi4",
    "Corpus",
    "Cosh",
    "Div",
    "DslError",
    "EulerNum",
    "Expectation",
    "Factorial",
    "FiniteRange",
    "Identity",
    "InfiniteIntegers",
    "IntLit",
    "Mul",
    "Neg",
    "OddPrimes",
    "Pi",
    "Pow",
    "RatLit",
    "Sqrt",
    "Sub",
    "Var",
    "builtin_corpus",
    "parse_corpus",
    "parse_expr",
    "print_corpus",
    "print_expr",
]


class DslError(ValueError):
    """Parse or validation failure, with a 1-based line/column position."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


# --- AST -----------------------------------------------------------------------

Pos = tuple  # (line, column); excluded from equality so trees compare structurally


def _pos_field():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IntLit:
    value: int
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class RatLit:
    value: Fraction
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Pi:
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Var:
    name: str
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Factorial:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Abs:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Sqrt:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Cosh:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class EulerNum:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class BernoulliHist:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Chi4:
    operand: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class FiniteRange:
    lo: int
    hi: int
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class InfiniteIntegers:
    start: int
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class OddPrimes:
    pos: Optional[Pos] = _pos_field()


Domain = Union[FiniteRange, InfiniteIntegers, OddPrimes]


@dataclass(frozen=True)
class BigSum:
    var: str
    domain: Domain
    body: "Expr"
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class BigProd:
    var: str
    domain: Domain
    body: "Expr"
    pos: Optional[Pos] = _pos_field()


Expr = Union[
    IntLit, RatLit, Pi, Var, Neg, Add, Sub, Mul, Div, Pow, Factorial,
    Abs, Sqrt, Cosh, EulerNum, BernoulliHist, Chi4, BigSum, BigProd,
]


@dataclass(frozen=True)
class Expectation:
    truth: bool
    min_digits: Optional[int] = None  # only meaningful when truth is True


@dataclass(frozen=True)
class Identity:
    ident: str
    lhs: Expr
    rhs: Expr
    param: Optional[tuple] = None  # (name, lo, hi)
    expect: Expectation = Expectation(True)
    pos: Optional[Pos] = _pos_field()


@dataclass(frozen=True)
class Corpus:
    identities: tuple

    def __iter__(self):
        return iter(self.identities)

    def __len__(self):
        return len(self.identities)

    def get(self, ident: str) -> Identity:
        for item in self.identities:
            if item.ident == ident:
                return item
        raise KeyError(ident)


_FUNCTIONS = {
    "sqrt": Sqrt,
    "cosh": Cosh,
    "abs": Abs,
    "euler": EulerNum,
    "bernoulli_hist": BernoulliHist,
    "chi4": Chi4,
}

_KEYWORDS = {"identity", "lhs", "rhs", "param", "in", "expect", "true", "false",
             "digits", "sum", "prod", "inf", "odd_primes"}


# --- lexer ----------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<comment>\#[^\n]*)
    | (?P<newline>\n)
    | (?P<decimal>\d+\.\d+)
    | (?P<int>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"[^"\n]*")
    | (?P<dotdot>\.\.)
    | (?P<ge>>=)
    | (?P<sym>[{}(),;=+\-*/^!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "decimal" | "ident" | "string" | symbol text | "eof"
    text: str
    line: int
    column: int


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    i, n = 0, len(source)
    while i < n:
        m = _TOKEN_RE.match(source, i)
        if m is None:
            raise DslError(f"unexpected character {source[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = i - line_start + 1
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind in ("ws", "comment"):
            pass
        elif kind in ("int", "decimal", "ident", "string"):
            tokens.append(_Token(kind, text, line, col))
        elif kind == "dotdot":
            tokens.append(_Token("..", text, line, col))
        elif kind == "ge":
            tokens.append(_Token(">=", text, line, col))
        else:  # single-character symbol
            tokens.append(_Token(text, text, line, col))
        i = m.end()
    tokens.append(_Token("eof", "", line, n - line_start + 1))
    return tokens


# --- parser ----------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.tokens = _lex(source)
        self.i = 0

    # token plumbing

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def _fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.cur
        raise DslError(message, tok.line, tok.column)

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def accept(self, kind: str) -> Optional[_Token]:
        if self.cur.kind == kind:
            return self.advance()
        return None

    def accept_word(self, word: str) -> Optional[_Token]:
        if self.cur.kind == "ident" and self.cur.text == word:
            return self.advance()
        return None

    def expect(self, kind: str, what: str | None = None) -> _Token:
        if self.cur.kind != kind:
            shown = self.cur.text or "end of input"
            self._fail(f"expected {what or kind!r}, found {shown!r}")
        return self.advance()

    def expect_word(self, word: str) -> _Token:
        tok = self.accept_word(word)
        if tok is None:
            shown = self.cur.text or "end of input"
            self._fail(f"expected {word!r}, found {shown!r}")
        return tok

    def expect_int(self, what: str = "integer") -> tuple[int, _Token]:
        tok = self.expect("int", what)
        return int(tok.text), tok

    # grammar

    def corpus(self) -> Corpus:
        items = []
        while self.cur.kind != "eof":
            items.append(self.identity())
        return Corpus(tuple(items))

    def identity(self) -> Identity:
        head = self.expect_word("identity")
        name_tok = self.expect("string", "identity name string")
        name = name_tok.text[1:-1]
        if not name:
            self._fail("identity name must not be empty", name_tok)
        self.expect("{")

        self.expect_word("lhs")
        self.expect("=")
        lhs = self.expr()
        self.expect(";")

        self.expect_word("rhs")
        self.expect("=")
        rhs = self.expr()
        self.expect(";")

        param = None
        if self.accept_word("param"):
            var_tok = self.expect("ident", "parameter name")
            self._check_name(var_tok)
            self.expect_word("in")
            lo, _ = self.expect_int()
            self.expect("..")
            hi, hi_tok = self.expect_int()
            if lo > hi:
                self._fail(f"empty parameter range {lo}..{hi}", hi_tok)
            self.expect(";")
            param = (var_tok.text, lo, hi)

        self.expect_word("expect")
        self.expect("=")
        expect = self.expectation()
        self.expect(";")
        self.expect("}")
        return Identity(name, lhs, rhs, param, expect, pos=(head.line, head.column))

    def expectation(self) -> Expectation:
        if self.accept_word("true"):
            digits = None
            if self.accept(">="):
                digits, tok = self.expect_int("digit count")
                if digits < 1:
                    self._fail("digit requirement must be >= 1", tok)
                self.expect_word("digits")
            return Expectation(True, digits)
        if self.accept_word("false"):
            return Expectation(False)
        self._fail(f"expected 'true' or 'false', found {self.cur.text!r}")

    def expr(self) -> Expr:
        return self.additive()

    def additive(self) -> Expr:
        node = self.mult()
        while self.cur.kind in ("+", "-"):
            op = self.advance()
            right = self.mult()
            cls = Add if op.kind == "+" else Sub
            node = cls(node, right, pos=(op.line, op.column))
        return node

    def mult(self) -> Expr:
        node = self.unary()
        while self.cur.kind in ("*", "/"):
            op = self.advance()
            right = self.unary()
            cls = Mul if op.kind == "*" else Div
            node = cls(node, right, pos=(op.line, op.column))
        return node

    def unary(self) -> Expr:
        if self.cur.kind == "-":
            op = self.advance()
            return Neg(self.postfix(), pos=(op.line, op.column))
        return self.postfix()

    def postfix(self) -> Expr:
        node = self.atom()
        while True:
            if self.cur.kind == "^":
                op = self.advance()
                node = Pow(node, self.unary(), pos=(op.line, op.column))
            elif self.cur.kind == "!":
                op = self.advance()
                node = Factorial(node, pos=(op.line, op.column))
            else:
                return node

    def atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text), pos=(tok.line, tok.column))
        if tok.kind == "decimal":
            self.advance()
            return RatLit(Fraction(tok.text), pos=(tok.line, tok.column))
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident":
            if tok.text in ("sum", "prod"):
                return self.bigop()
            self.advance()
            pos = (tok.line, tok.column)
            if tok.text == "pi":
                return Pi(pos=pos)
            if self.cur.kind == "(":
                if tok.text not in _FUNCTIONS:
                    self._fail(f"unknown function {tok.text!r}", tok)
                self.advance()
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    self._fail(f"{tok.text} takes exactly 1 argument, got {len(args)}", tok)
                return _FUNCTIONS[tok.text](args[0], pos=pos)
            self._check_name(tok)
            return Var(tok.text, pos=pos)
        self._fail(f"expected an expression, found {tok.text or 'end of input'!r}")

    def bigop(self) -> Expr:
        head = self.advance()  # "sum" or "prod"
        self.expect("(")
        var_tok = self.expect("ident", "index variable")
        self._check_name(var_tok)
        self.expect(",")
        domain = self.domain()
        self.expect(",")
        body = self.expr()
        self.expect(")")
        cls = BigSum if head.text == "sum" else BigProd
        return cls(var_tok.text, domain, body, pos=(head.line, head.column))

    def domain(self) -> Domain:
        tok = self.cur
        if self.accept_word("odd_primes"):
            return OddPrimes(pos=(tok.line, tok.column))
        lo, lo_tok = self.expect_int("domain bound")
        self.expect("..")
        if self.accept_word("inf"):
            if lo not in (0, 1):
                self._fail("an infinite range must start at 0 or 1", lo_tok)
            return InfiniteIntegers(lo, pos=(lo_tok.line, lo_tok.column))
        hi, hi_tok = self.expect_int("domain bound")
        if lo > hi:
            self._fail(f"empty range {lo}..{hi}", hi_tok)
        return FiniteRange(lo, hi, pos=(lo_tok.line, lo_tok.column))

    def _check_name(self, tok: _Token):
        if tok.text in _KEYWORDS or tok.text == "pi" or tok.text in _FUNCTIONS:
            self._fail(f"{tok.text!r} is reserved and cannot name a variable", tok)


# --- validation -------------------------------------------------------------------


def _validate_corpus(corpus: Corpus) -> None:
    seen: dict[str, Identity] = {}
    for item in corpus:
        if item.ident in seen:
            raise DslError(
                f"duplicate identity name {item.ident!r}",
                *(item.pos or (None, None)),
            )
        seen[item.ident] = item
        bound = frozenset({item.param[0]}) if item.param else frozenset()
        for side in (item.lhs, item.rhs):
            _validate_expr(side, bound, odd_prime_vars=frozenset())


def _validate_expr(node: Expr, bound: frozenset, odd_prime_vars: frozenset) -> None:
    if isinstance(node, Var):
        if node.name not in bound:
            raise DslError(f"unbound variable {node.name!r}", *(node.pos or (None, None)))
    elif isinstance(node, Chi4):
        arg = node.operand
        if not (isinstance(arg, Var) and arg.name in odd_prime_vars):
            raise DslError(
                "chi4 applies only to the index variable of an enclosing "
                "odd-primes product/sum",
                *(node.pos or (None, None)),
            )
    elif isinstance(node, (Factorial, EulerNum, BernoulliHist)):
        what = {Factorial: "'!'", EulerNum: "euler", BernoulliHist: "bernoulli_hist"}[type(node)]
        _require_integer_valued(node.operand, bound, what)
        _validate_expr(node.operand, bound, odd_prime_vars)
    elif isinstance(node, (Neg, Abs, Sqrt, Cosh)):
        _validate_expr(node.operand, bound, odd_prime_vars)
    elif isinstance(node, (Add, Sub, Mul, Div)):
        _validate_expr(node.left, bound, odd_prime_vars)
        _validate_expr(node.right, bound, odd_prime_vars)
    elif isinstance(node, Pow):
        _validate_expr(node.base, bound, odd_prime_vars)
        _validate_expr(node.exponent, bound, odd_prime_vars)
    elif isinstance(node, (BigSum, BigProd)):
        inner = bound | {node.var}
        inner_odd = odd_prime_vars
        if isinstance(node.domain, OddPrimes):
            inner_odd = odd_prime_vars | {node.var}
        _validate_expr(node.body, inner, inner_odd)
    # IntLit, RatLit, Pi: nothing to check


_INTEGER_VALUED = (IntLit, Var, Neg, Add, Sub, Mul, Pow, Factorial, Abs, EulerNum)


def _require_integer_valued(node: Expr, bound: frozenset, context: str) -> None:
    """Arguments of !, euler, bernoulli_hist must be provably integer-valued."""
    if not isinstance(node, _INTEGER_VALUED):
        raise DslError(
            f"argument of {context} must be an integer-valued expression "
            f"(found {type(node).__name__})",
            *(getattr(node, "pos", None) or (None, None)),
        )
    for child_name in ("operand", "left", "right", "base", "exponent"):
        child = getattr(node, child_name, None)
        if child is not None:
            _require_integer_valued(child, bound, context)


# --- canonical printer -------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_POSTFIX, _PREC_ATOM = 1, 2, 3, 4, 5, 6


def _prec(node: Expr) -> int:
    if isinstance(node, (Add, Sub)):
        return _PREC_ADD
    if isinstance(node, (Mul, Div, RatLit)):
        return _PREC_MUL  # RatLit prints as a division
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    if isinstance(node, Factorial):
        return _PREC_POSTFIX
    return _PREC_ATOM


def _wrap(node: Expr, minimum: int) -> str:
    text = print_expr(node)
    return f"({text})" if _prec(node) < minimum else text


def print_expr(node: Expr) -> str:
    """Canonical rendering: minimal parentheses, single-space binary operators."""
    if isinstance(node, IntLit):
        return str(node.value)
    if isinstance(node, RatLit):
        return f"{node.value.numerator} / {node.value.denominator}"
    if isinstance(node, Pi):
        return "pi"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _PREC_POW)
    if isinstance(node, Add):
        return f"{_wrap(node.left, _PREC_ADD)} + {_wrap(node.right, _PREC_MUL)}"
    if isinstance(node, Sub):
        return f"{_wrap(node.left, _PREC_ADD)} - {_wrap(node.right, _PREC_MUL)}"
    if isinstance(node, Mul):
        return f"{_wrap(node.left, _PREC_MUL)} * {_wrap(node.right, _PREC_NEG)}"
    if isinstance(node, Div):
        return f"{_wrap(node.left, _PREC_MUL)} / {_wrap(node.right, _PREC_NEG)}"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _PREC_POSTFIX)}^{_wrap(node.exponent, _PREC_NEG)}"
    if isinstance(node, Factorial):
        return _wrap(node.operand, _PREC_POSTFIX) + "!"
    if isinstance(node, Abs):
        return f"abs({print_expr(node.operand)})"
    if isinstance(node, Sqrt):
        return f"sqrt({print_expr(node.operand)})"
    if isinstance(node, Cosh):
        return f"cosh({print_expr(node.operand)})"
    if isinstance(node, EulerNum):
        return f"euler({print_expr(node.operand)})"
    if isinstance(node, BernoulliHist):
        return f"bernoulli_hist({print_expr(node.operand)})"
    if isinstance(node, Chi4):
        return f"chi4({print_expr(node.operand)})"
    if isinstance(node, (BigSum, BigProd)):
        op = "sum" if isinstance(node, BigSum) else "prod"
        return f"{op}({node.var}, {_print_domain(node.domain)}, {print_expr(node.body)})"
    raise TypeError(f"not an expression node: {node!r}")


def _print_domain(domain: Domain) -> str:
    if isinstance(domain, OddPrimes):
        return "odd_primes"
    if isinstance(domain, InfiniteIntegers):
        return f"{domain.start}..inf"
    return f"{domain.lo}..{domain.hi}"


def print_corpus(corpus: Corpus) -> str:
    blocks = []
    for item in corpus:
        lines = [f'identity "{item.ident}" {{']
        lines.append(f"  lhs = {print_expr(item.lhs)};")
        lines.append(f"  rhs = {print_expr(item.rhs)};")
        if item.param:
            name, lo, hi = item.param
            lines.append(f"  param {name} in {lo}..{hi};")
        if item.expect.truth:
            if item.expect.min_digits is not None:
                lines.append(f"  expect = true >= {item.expect.min_digits} digits;")
            else:
                lines.append("  expect = true;")
        else:
            lines.append("  expect = false;")
        lines.append("}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# --- entry points ------------------------------------------------------------------


def parse_corpus(source: str, validate: bool = True) -> Corpus:
    corpus = _Parser(source).corpus()
    if validate:
        _validate_corpus(corpus)
    return corpus


def parse_expr(source: str) -> Expr:
    """Parse a single expression (used by tests and the CLI)."""
    parser = _Parser(source)
    node = parser.expr()
    if parser.cur.kind != "eof":
        parser._fail(f"unexpected trailing input {parser.cur.text!r}")
    return node


def builtin_corpus() -> Corpus:
    """The identity corpus shipped with the package."""
    text = resources.files("identicheck").joinpath("corpus/dilcher_vignat.idn").read_text(
        encoding="utf-8"
    )
    return parse_corpus(text)
