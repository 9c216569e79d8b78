"""First-order and second-order correspondence-language syntax.

The first-order language has equality, one binary relation symbol ``R``,
and unary predicate symbols (capitalized proposition letters).  Terms
are individual variables only.  Conjunction and disjunction are n-ary.
A second-order formula is a first-order matrix under a universal prefix
of predicate symbols.

Variable naming discipline: ``x`` is the designated free (source)
variable, ``y``-series variables are introduced by the standard
translation, ``z``-series variables are universally quantified
parameters of minimal valuations, and ``v``-series variables build
relation chains.  A :class:`VarGen` hands out each series from a
monotone counter, so produced formulas are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import ParseError


class FO:
    """Base class for first-order formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_fo(self)


@dataclass(frozen=True)
class TrueLit(FO):
    pass


@dataclass(frozen=True)
class FalseLit(FO):
    pass


@dataclass(frozen=True)
class Eq(FO):
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Rel(FO):
    """R(lhs, rhs): the accessibility relation."""

    lhs: str
    rhs: str


@dataclass(frozen=True)
class Pred(FO):
    """P(arg) for the unary predicate named sym."""

    sym: str
    arg: str


@dataclass(frozen=True)
class Not(FO):
    body: FO


@dataclass(frozen=True)
class And(FO):
    parts: tuple[FO, ...]


@dataclass(frozen=True)
class Or(FO):
    parts: tuple[FO, ...]


@dataclass(frozen=True)
class Implies(FO):
    lhs: FO
    rhs: FO


@dataclass(frozen=True)
class Forall(FO):
    var: str
    body: FO


@dataclass(frozen=True)
class Exists(FO):
    var: str
    body: FO


TRUE = TrueLit()
FALSE = FalseLit()


@dataclass(frozen=True)
class SO:
    """Universal second-order prefix over a first-order matrix."""

    prefix: tuple[str, ...]
    matrix: FO

    def __str__(self) -> str:
        return print_fo(self)


def conj(parts) -> FO:
    """n-ary conjunction; empty is true, singleton collapses."""
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts) -> FO:
    """n-ary disjunction; empty is false, singleton collapses."""
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


class VarGen:
    """Fresh-variable factory: one monotone counter per name series."""

    def __init__(self, start: Mapping[str, int] | None = None):
        self._next = dict(start or {})

    def fresh(self, series: str) -> str:
        n = self._next.get(series, 1 if series == "z" else 0)
        self._next[series] = n + 1
        return f"{series}{n}"


def pred_sym(letter: str) -> str:
    """Predicate symbol for a proposition letter (capitalized)."""
    return letter.capitalize()


# ---------------------------------------------------------------------------
# Variable bookkeeping


def free_vars(f: FO) -> frozenset[str]:
    if isinstance(f, (TrueLit, FalseLit)):
        return frozenset()
    if isinstance(f, (Eq, Rel)):
        return frozenset((f.lhs, f.rhs))
    if isinstance(f, Pred):
        return frozenset((f.arg,))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for g in f.parts:
            out |= free_vars(g)
        return out
    if isinstance(f, Implies):
        return free_vars(f.lhs) | free_vars(f.rhs)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a first-order formula: {f!r}")


def bound_vars(f: FO) -> frozenset[str]:
    if isinstance(f, (TrueLit, FalseLit, Eq, Rel, Pred)):
        return frozenset()
    if isinstance(f, Not):
        return bound_vars(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for g in f.parts:
            out |= bound_vars(g)
        return out
    if isinstance(f, Implies):
        return bound_vars(f.lhs) | bound_vars(f.rhs)
    if isinstance(f, (Forall, Exists)):
        return bound_vars(f.body) | {f.var}
    raise TypeError(f"not a first-order formula: {f!r}")


def predicates(f: FO) -> tuple[str, ...]:
    """Predicate symbols in order of first occurrence."""
    seen: dict[str, None] = {}

    def walk(g: FO) -> None:
        if isinstance(g, Pred):
            seen.setdefault(g.sym)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, (And, Or)):
            for part in g.parts:
                walk(part)
        elif isinstance(g, Implies):
            walk(g.lhs)
            walk(g.rhs)
        elif isinstance(g, (Forall, Exists)):
            walk(g.body)

    walk(f)
    return tuple(seen)


def subst_var(f: FO, mapping: Mapping[str, str]) -> FO:
    """Rename free variable occurrences.  Bound variables shadow.

    The caller must keep substitution capture-free; produced formulas
    obey the convention that bound names never collide with names being
    substituted in, and this is asserted here.
    """
    if not mapping:
        return f
    if isinstance(f, (TrueLit, FalseLit)):
        return f
    if isinstance(f, Eq):
        return Eq(mapping.get(f.lhs, f.lhs), mapping.get(f.rhs, f.rhs))
    if isinstance(f, Rel):
        return Rel(mapping.get(f.lhs, f.lhs), mapping.get(f.rhs, f.rhs))
    if isinstance(f, Pred):
        return Pred(f.sym, mapping.get(f.arg, f.arg))
    if isinstance(f, Not):
        return Not(subst_var(f.body, mapping))
    if isinstance(f, And):
        return And(tuple(subst_var(g, mapping) for g in f.parts))
    if isinstance(f, Or):
        return Or(tuple(subst_var(g, mapping) for g in f.parts))
    if isinstance(f, Implies):
        return Implies(subst_var(f.lhs, mapping), subst_var(f.rhs, mapping))
    if isinstance(f, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        assert f.var not in inner.values(), "substitution would capture a variable"
        return type(f)(f.var, subst_var(f.body, inner))
    raise TypeError(f"not a first-order formula: {f!r}")


def freshen_bound(f: FO, gen: VarGen, series: str = "v") -> FO:
    """Rename every bound variable to a fresh name from the generator."""

    def go(g: FO, ren: dict[str, str]) -> FO:
        if isinstance(g, (TrueLit, FalseLit)):
            return g
        if isinstance(g, Eq):
            return Eq(ren.get(g.lhs, g.lhs), ren.get(g.rhs, g.rhs))
        if isinstance(g, Rel):
            return Rel(ren.get(g.lhs, g.lhs), ren.get(g.rhs, g.rhs))
        if isinstance(g, Pred):
            return Pred(g.sym, ren.get(g.arg, g.arg))
        if isinstance(g, Not):
            return Not(go(g.body, ren))
        if isinstance(g, And):
            return And(tuple(go(h, ren) for h in g.parts))
        if isinstance(g, Or):
            return Or(tuple(go(h, ren) for h in g.parts))
        if isinstance(g, Implies):
            return Implies(go(g.lhs, ren), go(g.rhs, ren))
        if isinstance(g, (Forall, Exists)):
            new = gen.fresh(series)
            return type(g)(new, go(g.body, {**ren, g.var: new}))
        raise TypeError(f"not a first-order formula: {g!r}")

    return go(f, {})


def substitute_predicates(f: FO, define) -> FO:
    """Replace every predicate occurrence P(t) with define(sym, t).

    ``define`` returns a first-order formula; it is responsible for
    freshness of any variables it binds.
    """
    if isinstance(f, Pred):
        return define(f.sym, f.arg)
    if isinstance(f, (TrueLit, FalseLit, Eq, Rel)):
        return f
    if isinstance(f, Not):
        return Not(substitute_predicates(f.body, define))
    if isinstance(f, And):
        return And(tuple(substitute_predicates(g, define) for g in f.parts))
    if isinstance(f, Or):
        return Or(tuple(substitute_predicates(g, define) for g in f.parts))
    if isinstance(f, Implies):
        return Implies(
            substitute_predicates(f.lhs, define), substitute_predicates(f.rhs, define)
        )
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, substitute_predicates(f.body, define))
    raise TypeError(f"not a first-order formula: {f!r}")


# ---------------------------------------------------------------------------
# Printer

_PREC_IMP = 20
_PREC_OR = 30
_PREC_AND = 40
_PREC_EQ = 50
_PREC_NOT = 90
_PREC_ATOM = 100


def _prec(f: FO) -> int:
    if isinstance(f, (TrueLit, FalseLit, Rel, Pred)):
        return _PREC_ATOM
    if isinstance(f, Eq):
        return _PREC_EQ
    if isinstance(f, Not):
        return _PREC_NOT
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, Implies):
        return _PREC_IMP
    if isinstance(f, (Forall, Exists)):
        return 15
    raise TypeError(f"not a first-order formula: {f!r}")


def _body_pp(f: FO) -> str:
    # quantifier bodies: parenthesize binary connectives for readability
    s = _pp(f, 0)
    if isinstance(f, (And, Or, Implies, Eq)):
        return "(" + s + ")"
    return s


def _pp(f: FO, min_prec: int) -> str:
    p = _prec(f)
    if isinstance(f, TrueLit):
        s = "true"
    elif isinstance(f, FalseLit):
        s = "false"
    elif isinstance(f, Eq):
        s = f"{f.lhs} = {f.rhs}"
    elif isinstance(f, Rel):
        s = f"R({f.lhs},{f.rhs})"
    elif isinstance(f, Pred):
        s = f"{f.sym}({f.arg})"
    elif isinstance(f, Not):
        s = "~" + _pp(f.body, _PREC_NOT)
    elif isinstance(f, And):
        s = " & ".join(_pp(g, _PREC_AND + 1) for g in f.parts)
    elif isinstance(f, Or):
        s = " | ".join(_pp(g, _PREC_OR + 1) for g in f.parts)
    elif isinstance(f, Implies):
        s = _pp(f.lhs, _PREC_IMP + 1) + " -> " + _pp(f.rhs, _PREC_IMP)
    elif isinstance(f, Forall):
        s = f"all {f.var}. " + _body_pp(f.body)
    elif isinstance(f, Exists):
        s = f"exists {f.var}. " + _body_pp(f.body)
    else:
        raise TypeError(f"not a first-order formula: {f!r}")
    if p < min_prec:
        return "(" + s + ")"
    return s


def print_fo(f) -> str:
    """Render a first- or second-order formula; inverse of parse_fo on FO."""
    if isinstance(f, SO):
        out = "".join(f"all {sym}. " for sym in f.prefix)
        return out + _body_pp(f.matrix)
    return _pp(f, 0)


# ---------------------------------------------------------------------------
# Parser

_FO_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<uident>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<not>~)
  | (?P<and>&)
  | (?P<or>\|)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<comma>,)
  | (?P<dot>\.)
  | (?P<eq>=)
    """,
    re.VERBOSE,
)

_FO_KEYWORDS = {"all", "exists", "true", "false"}


def _fo_tokenize(text: str) -> list:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _FO_TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind != "ws":
            if kind == "ident" and lexeme in _FO_KEYWORDS:
                kind = lexeme
            tokens.append(_Tok(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Tok("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


class _FOParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind):
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

    def parse(self) -> FO:
        f = self.formula()
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(
                f"unexpected token {tok.text!r}", tok.line, tok.column, expected=("eof",)
            )
        return f

    def formula(self) -> FO:
        return self.iff()

    def iff(self) -> FO:
        lhs = self.imp()
        if self.peek().kind == "iff":
            self.take("iff")
            rhs = self.iff()
            # no first-class bi-implication node: expand to a conjunction
            return And((Implies(lhs, rhs), Implies(rhs, lhs)))
        return lhs

    def imp(self) -> FO:
        lhs = self.disj()
        if self.peek().kind == "imp":
            self.take("imp")
            return Implies(lhs, self.imp())
        return lhs

    def disj(self) -> FO:
        first = self.conj()
        parts = [first]
        while self.peek().kind == "or":
            self.take("or")
            parts.append(self.conj())
        return Or(tuple(parts)) if len(parts) > 1 else first

    def conj(self) -> FO:
        first = self.unary()
        parts = [first]
        while self.peek().kind == "and":
            self.take("and")
            parts.append(self.unary())
        return And(tuple(parts)) if len(parts) > 1 else first

    def unary(self) -> FO:
        tok = self.peek()
        if tok.kind == "not":
            self.take("not")
            return Not(self.unary())
        if tok.kind in ("all", "exists"):
            self.take(tok.kind)
            var = self.take("ident").text
            self.take("dot")
            body = self.formula()  # quantifier scope extends maximally right
            return Forall(var, body) if tok.kind == "all" else Exists(var, body)
        return self.atom()

    def atom(self) -> FO:
        tok = self.peek()
        if tok.kind == "true":
            self.take("true")
            return TRUE
        if tok.kind == "false":
            self.take("false")
            return FALSE
        if tok.kind == "lparen":
            self.take("lparen")
            f = self.formula()
            self.take("rparen")
            return f
        if tok.kind == "uident":
            self.take("uident")
            self.take("lparen")
            a = self.take("ident").text
            if tok.text == "R":
                self.take("comma")
                b = self.take("ident").text
                self.take("rparen")
                return Rel(a, b)
            self.take("rparen")
            return Pred(tok.text, a)
        if tok.kind == "ident":
            self.take("ident")
            self.take("eq")
            b = self.take("ident").text
            return Eq(tok.text, b)
        raise ParseError(
            f"unexpected token {tok.text or '<end of input>'!r}",
            tok.line,
            tok.column,
            expected=("atom", "(", "~", "all", "exists"),
        )


def parse_fo(text: str) -> FO:
    """Parse the concrete first-order syntax into a formula tree."""
    return _FOParser(_fo_tokenize(text)).parse()


def fo_subformulas(f: FO) -> Iterator[FO]:
    yield f
    if isinstance(f, Not):
        yield from fo_subformulas(f.body)
    elif isinstance(f, (And, Or)):
        for g in f.parts:
            yield from fo_subformulas(g)
    elif isinstance(f, Implies):
        yield from fo_subformulas(f.lhs)
        yield from fo_subformulas(f.rhs)
    elif isinstance(f, (Forall, Exists)):
        yield from fo_subformulas(f.body)


# ---------------------------------------------------------------------------
# TPTP FOF emission


def _tptp_var(name: str) -> str:
    return name[0].upper() + name[1:]


def _tptp(f: FO) -> str:
    if isinstance(f, TrueLit):
        return "$true"
    if isinstance(f, FalseLit):
        return "$false"
    if isinstance(f, Eq):
        return f"{_tptp_var(f.lhs)} = {_tptp_var(f.rhs)}"
    if isinstance(f, Rel):
        return f"r({_tptp_var(f.lhs)},{_tptp_var(f.rhs)})"
    if isinstance(f, Pred):
        return f"{f.sym.lower()}({_tptp_var(f.arg)})"
    if isinstance(f, Not):
        return f"~ {_tptp(f.body)}" if isinstance(f.body, (Rel, Pred)) else f"~ ({_tptp(f.body)})"
    if isinstance(f, And):
        return "(" + " & ".join(_tptp(g) for g in f.parts) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(_tptp(g) for g in f.parts) + ")"
    if isinstance(f, Implies):
        return f"({_tptp(f.lhs)} => {_tptp(f.rhs)})"
    if isinstance(f, Forall):
        return f"! [{_tptp_var(f.var)}] : ({_tptp(f.body)})"
    if isinstance(f, Exists):
        return f"? [{_tptp_var(f.var)}] : ({_tptp(f.body)})"
    raise TypeError(f"not a first-order formula: {f!r}")


def to_tptp(f: FO, name: str = "corr", role: str = "conjecture") -> str:
    """One TPTP FOF unit; free variables are universally closed."""
    g = f
    for var in sorted(free_vars(f)):
        g = Forall(var, g)
    return f"fof({name}, {role}, {_tptp(g)})."
