"""Modal formula trees, concrete syntax, and basic structural queries.

The object language has atoms ``true``/``false``, proposition letters
matching ``[a-z][a-z0-9_]*``, unary operators ``~`` ``[]`` ``<>``, and
binary operators ``&`` ``|`` ``->`` ``<->``.  Top, conjunction,
implication, bi-implication and box are first-class nodes even though
they are definable from the primitive basis; syntactic classification
works on the surface tree, so the defined connectives must survive
parsing.  All nodes are immutable and hashable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import ParseError


class Formula:
    """Base class for modal formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_modal(self)


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


BOTTOM = Bottom()
TOP = Top()

_KEYWORDS = {"true", "false"}


# ---------------------------------------------------------------------------
# Tokenizer / parser


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<box>\[\])
  | (?P<dia><>)
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lparen>\()
  | (?P<rparen>\))
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind != "ws":
            if kind == "ident" and lexeme in _KEYWORDS:
                kind = lexeme
            tokens.append(_Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"unexpected token {tok.text or '<end of input>'!r}",
                tok.line,
                tok.column,
                expected=(kind,),
            )
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(
                f"unexpected token {tok.text!r}", tok.line, tok.column, expected=("eof",)
            )
        return f

    def iff(self) -> Formula:
        lhs = self.imp()
        if self.peek().kind == "iff":
            self.take("iff")
            return Iff(lhs, self.iff())
        return lhs

    def imp(self) -> Formula:
        lhs = self.disj()
        if self.peek().kind == "imp":
            self.take("imp")
            return Implies(lhs, self.imp())
        return lhs

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek().kind == "or":
            self.take("or")
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "and":
            self.take("and")
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "not":
            self.take("not")
            return Not(self.unary())
        if tok.kind == "box":
            self.take("box")
            return Box(self.unary())
        if tok.kind == "dia":
            self.take("dia")
            return Dia(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "true":
            self.take("true")
            return TOP
        if tok.kind == "false":
            self.take("false")
            return BOTTOM
        if tok.kind == "ident":
            self.take("ident")
            return Prop(tok.text)
        if tok.kind == "lparen":
            self.take("lparen")
            f = self.iff()
            self.take("rparen")
            return f
        raise ParseError(
            f"unexpected token {tok.text or '<end of input>'!r}",
            tok.line,
            tok.column,
            expected=("true", "false", "letter", "("),
        )


def parse_modal(text: str) -> Formula:
    """Parse the concrete modal syntax into a formula tree."""
    return _Parser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# Printer

# Precedence levels; higher binds tighter.  Unary operators take an
# operand at their own level, so no parentheses between stacked unaries.
_PREC_IFF = 10
_PREC_IMP = 20
_PREC_OR = 30
_PREC_AND = 40
_PREC_UNARY = 90
_PREC_ATOM = 100


def _prec(f: Formula) -> int:
    if isinstance(f, (Bottom, Top, Prop)):
        return _PREC_ATOM
    if isinstance(f, (Not, Box, Dia)):
        return _PREC_UNARY
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, Implies):
        return _PREC_IMP
    if isinstance(f, Iff):
        return _PREC_IFF
    raise TypeError(f"not a modal formula: {f!r}")


def _pp(f: Formula, min_prec: int) -> str:
    p = _prec(f)
    if isinstance(f, Bottom):
        s = "false"
    elif isinstance(f, Top):
        s = "true"
    elif isinstance(f, Prop):
        s = f.name
    elif isinstance(f, Not):
        s = "~" + _pp(f.body, _PREC_UNARY)
    elif isinstance(f, Box):
        s = "[]" + _pp(f.body, _PREC_UNARY)
    elif isinstance(f, Dia):
        s = "<>" + _pp(f.body, _PREC_UNARY)
    elif isinstance(f, And):
        # left-associative: right operand needs strictly higher precedence
        s = _pp(f.lhs, _PREC_AND) + " & " + _pp(f.rhs, _PREC_AND + 1)
    elif isinstance(f, Or):
        s = _pp(f.lhs, _PREC_OR) + " | " + _pp(f.rhs, _PREC_OR + 1)
    elif isinstance(f, Implies):
        # right-associative: left operand needs strictly higher precedence
        s = _pp(f.lhs, _PREC_IMP + 1) + " -> " + _pp(f.rhs, _PREC_IMP)
    elif isinstance(f, Iff):
        s = _pp(f.lhs, _PREC_IFF + 1) + " <-> " + _pp(f.rhs, _PREC_IFF)
    else:
        raise TypeError(f"not a modal formula: {f!r}")
    if p < min_prec:
        return "(" + s + ")"
    return s


def print_modal(f: Formula) -> str:
    """Render with minimal parenthesization; inverse of parse_modal."""
    return _pp(f, 0)


# ---------------------------------------------------------------------------
# Structural queries


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every subformula occurrence, depth-first, including f itself."""
    yield f
    if isinstance(f, (Not, Box, Dia)):
        yield from subformulas(f.body)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from subformulas(f.lhs)
        yield from subformulas(f.rhs)


def modal_depth(f: Formula) -> int:
    """Maximum nesting of modal operators (both box and diamond count)."""
    if isinstance(f, (Bottom, Top, Prop)):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.body)
    if isinstance(f, (Box, Dia)):
        return 1 + modal_depth(f.body)
    return max(modal_depth(f.lhs), modal_depth(f.rhs))


def prop_letters(f: Formula) -> tuple[str, ...]:
    """Proposition letters in order of first occurrence."""
    seen: dict[str, None] = {}
    for g in subformulas(f):
        if isinstance(g, Prop):
            seen.setdefault(g.name)
    return tuple(seen)


def substitute_prop(f: Formula, mapping: Mapping[str, Formula]) -> Formula:
    """Simultaneously substitute formulas for proposition letters."""
    if isinstance(f, Prop):
        return mapping.get(f.name, f)
    if isinstance(f, (Bottom, Top)):
        return f
    if isinstance(f, Not):
        return Not(substitute_prop(f.body, mapping))
    if isinstance(f, Box):
        return Box(substitute_prop(f.body, mapping))
    if isinstance(f, Dia):
        return Dia(substitute_prop(f.body, mapping))
    lhs = substitute_prop(f.lhs, mapping)
    rhs = substitute_prop(f.rhs, mapping)
    return type(f)(lhs, rhs)


def desugar(f: Formula) -> Formula:
    """Rewrite into the primitive basis {false, letters, ~, |, <>}.

    Extension-preserving; used only to cross-check that the first-class
    defined connectives agree with their definitions.
    """
    if isinstance(f, (Bottom, Prop)):
        return f
    if isinstance(f, Top):
        return Not(BOTTOM)
    if isinstance(f, Not):
        return Not(desugar(f.body))
    if isinstance(f, Dia):
        return Dia(desugar(f.body))
    if isinstance(f, Box):
        return Not(Dia(Not(desugar(f.body))))
    if isinstance(f, Or):
        return Or(desugar(f.lhs), desugar(f.rhs))
    if isinstance(f, And):
        return Not(Or(Not(desugar(f.lhs)), Not(desugar(f.rhs))))
    if isinstance(f, Implies):
        return Or(Not(desugar(f.lhs)), desugar(f.rhs))
    if isinstance(f, Iff):
        return desugar(And(Implies(f.lhs, f.rhs), Implies(f.rhs, f.lhs)))
    raise TypeError(f"not a modal formula: {f!r}")
