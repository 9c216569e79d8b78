"""Correspondence-language syntax: printing, parsing, variable tools."""

import random

import pytest

from modalcorr import fol
from modalcorr.errors import ParseError
from modalcorr.fol import (
    And,
    Eq,
    Exists,
    Forall,
    Not,
    Or,
    Pred,
    Rel,
    SO,
    VarGen,
    free_vars,
    bound_vars,
    parse_fo,
    print_fo,
    subst_var,
    to_tptp,
)

from genformulas import random_fo


class TestPrint:
    def test_forall_negated_atom(self):
        assert print_fo(Forall("y", Not(Rel("x", "y")))) == "all y. ~R(x,y)"

    def test_equality(self):
        assert print_fo(Eq("x", "x")) == "x = x"

    def test_exists_conjunction(self):
        f = Exists("y", And((Rel("x", "y"), Pred("P", "y"))))
        assert print_fo(f) == "exists y. (R(x,y) & P(y))"

    def test_negated_equality_parenthesized(self):
        assert print_fo(Not(Eq("x", "x"))) == "~(x = x)"

    def test_quantifier_as_operand(self):
        f = And((Forall("y", Rel("x", "y")), Rel("x", "x")))
        assert print_fo(f) == "(all y. R(x,y)) & R(x,x)"

    def test_so_prefix(self):
        so = SO(("P",), fol.Implies(Pred("P", "x"), Pred("P", "x")))
        assert print_fo(so) == "all P. (P(x) -> P(x))"


class TestParse:
    def test_round_trip_examples(self):
        for text in (
            "all y. ~R(x,y)",
            "x = x",
            "exists y. (R(x,y) & P(y))",
            "all z. all u. (R(x,z) & R(x,u) -> z = u)",
            "R(x,x) | x = x",
            "true",
            "~(x = y)",
        ):
            assert print_fo(parse_fo(text)) == text

    def test_round_trip_random(self):
        rng = random.Random(11)
        for _ in range(300):
            f = random_fo(rng)
            assert parse_fo(print_fo(f)) == f

    def test_nary_flattening(self):
        f = parse_fo("R(x,x) & x = x & P(x)")
        assert isinstance(f, And) and len(f.parts) == 3
        g = parse_fo("R(x,x) & (x = x & P(x))")
        assert isinstance(g, And) and len(g.parts) == 2

    def test_iff_expands(self):
        f = parse_fo("R(x,x) <-> x = x")
        assert isinstance(f, And) and all(
            isinstance(g, fol.Implies) for g in f.parts
        )

    def test_parse_error(self):
        with pytest.raises(ParseError):
            parse_fo("all . R(x,y)")
        with pytest.raises(ParseError):
            parse_fo("R(x)")


class TestVars:
    def test_free_and_bound(self):
        f = parse_fo("all y. (R(x,y) -> exists z. R(y,z))")
        assert free_vars(f) == {"x"}
        assert bound_vars(f) == {"y", "z"}

    def test_subst_respects_binders(self):
        f = parse_fo("R(x,y) & (all y. R(y,y))")
        g = subst_var(f, {"y": "z"})
        assert print_fo(g) == "R(x,z) & (all y. R(y,y))"

    def test_vargen_series(self):
        gen = VarGen()
        assert [gen.fresh("y") for _ in range(2)] == ["y0", "y1"]
        assert [gen.fresh("z") for _ in range(2)] == ["z1", "z2"]
        assert gen.fresh("y") == "y2"

    def test_freshen_bound(self):
        gen = VarGen()
        f = parse_fo("exists v0. (z1 = v0 & R(v0,v0))")
        g = fol.freshen_bound(f, gen)
        assert print_fo(g) == "exists v0. (z1 = v0 & R(v0,v0))"
        h = fol.freshen_bound(f, gen)
        assert print_fo(h) == "exists v1. (z1 = v1 & R(v1,v1))"

    def test_conj_disj_units(self):
        assert fol.conj(()) == fol.TRUE
        assert fol.disj(()) == fol.FALSE
        assert fol.conj((Eq("x", "x"),)) == Eq("x", "x")


class TestTptp:
    def test_universal_closure_and_case(self):
        assert to_tptp(parse_fo("R(x,x)")) == "fof(corr, conjecture, ! [X] : (r(X,X)))."

    def test_operators(self):
        unit = to_tptp(parse_fo("all y. (R(x,y) -> ~(y = y))"), name="t")
        assert unit.startswith("fof(t, conjecture,")
        assert "=>" in unit and "~" in unit

    def test_predicates_lowercased(self):
        assert "p(X)" in to_tptp(Pred("P", "x"))
