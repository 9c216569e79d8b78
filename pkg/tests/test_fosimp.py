"""First-order simplification: rules, idempotence, semantic safety."""

import random

import pytest

from modalcorr import fol
from modalcorr.errors import ResourceCap, UnboundVariable
from modalcorr.fol import parse_fo, print_fo
from modalcorr.fosimp import equivalent_on_small_frames, simplify

from genformulas import random_fo


def simp_text(text: str) -> str:
    return print_fo(simplify(parse_fo(text)))


class TestRules:
    def test_uniform_example(self):
        assert (
            simp_text("all y. (R(x,y) -> exists z. (R(y,z) & ~(z = z)))")
            == "all y. ~R(x,y)"
        )

    def test_one_point_chain(self):
        assert simp_text("exists u. (R(x,u) & R(z2,x) & u = x)") == "R(x,x) & R(z2,x)"

    def test_conjunction_unit(self):
        assert simp_text("R(x,x) & true") == "R(x,x)"

    def test_disjunction_unit(self):
        assert simp_text("R(x,x) | false") == "R(x,x)"

    def test_absorbing(self):
        assert simp_text("R(x,x) & false") == "false"
        assert simp_text("R(x,x) | true") == "true"

    def test_reflexive_equality(self):
        assert simp_text("x = x") == "true"
        assert simp_text("~(x = x)") == "false"

    def test_double_negation(self):
        assert simp_text("~~R(x,x)") == "R(x,x)"

    def test_implication_units(self):
        assert simp_text("true -> R(x,x)") == "R(x,x)"
        assert simp_text("false -> R(x,x)") == "true"
        assert simp_text("R(x,x) -> true") == "true"
        assert simp_text("R(x,x) -> false") == "~R(x,x)"

    def test_vacuous_quantifier(self):
        assert simp_text("all y. R(x,x)") == "R(x,x)"
        assert simp_text("exists y. true") == "true"

    def test_one_point_forall(self):
        assert simp_text("all y. (y = x -> R(y,y))") == "R(x,x)"
        assert simp_text("all y. (y = x & R(x,y) -> R(y,y))") == "R(x,x) -> R(x,x)"
        assert simp_text("all z1. (z1 = x -> (all u. (R(z1,u) -> u = z1)))") == (
            "all u. (R(x,u) -> u = x)"
        )

    def test_one_point_exists_lone_equation(self):
        assert simp_text("exists y. y = x") == "true"

    def test_flattening_and_dedup(self):
        assert simp_text("R(x,x) & (R(x,x) & P(x))") == "R(x,x) & P(x)"
        assert simp_text("R(x,x) | (R(x,x) | P(x))") == "R(x,x) | P(x)"

    def test_shadowed_variable_not_touched(self):
        # the inner binder shadows; the one-point equation belongs to it
        assert (
            simp_text("all y. (R(x,y) -> (exists y. (y = x & R(y,y))))")
            == "all y. (R(x,y) -> R(x,x))"
        )

    def test_one_point_declines_when_substitution_would_capture(self):
        text = "exists y. (y = x & (all x. R(x,y)))"
        f = parse_fo(text)
        assert print_fo(simplify(f)) == text
        assert equivalent_on_small_frames(f, simplify(f), 3) is None


class TestIdempotenceAndSafety:
    def test_idempotent_random(self):
        rng = random.Random(109)
        for _ in range(300):
            f = random_fo(rng, depth=4)
            s = simplify(f)
            assert simplify(s) == s

    def test_equivalence_random_exhaustive_small(self):
        rng = random.Random(113)
        for _ in range(120):
            f = random_fo(rng, depth=4)
            assert equivalent_on_small_frames(f, simplify(f), 3) is None

    def test_rule_level_cases_equivalent(self):
        cases = [
            "all y. (R(x,y) -> exists z. (R(y,z) & ~(z = z)))",
            "exists u. (R(x,u) & R(x,x) & u = x)",
            "all y. (y = x -> R(y,y))",
            "exists y. (y = x & R(y,x))",
            "R(x,x) & true & R(x,x)",
            "~~(x = x)",
            "all v. true",
            "exists w. (w = x)",
            "R(x,x) -> false",
        ]
        for text in cases:
            f = parse_fo(text)
            assert equivalent_on_small_frames(f, simplify(f), 3) is None


class TestEquivalenceChecker:
    def test_pass(self):
        assert equivalent_on_small_frames(parse_fo("R(x,x)"), parse_fo("R(x,x)"), 3) is None

    def test_counterexample(self):
        out = equivalent_on_small_frames(parse_fo("R(x,x)"), parse_fo("true"), 2)
        assert out is not None
        frame, assignment = out
        assert frame.size == 1 and frame.succ == (0,)
        assert assignment == {"x": 0}

    def test_resource_cap(self):
        with pytest.raises(ResourceCap):
            equivalent_on_small_frames(parse_fo("true"), parse_fo("true"), 9)

    def test_rejects_stray_free_variables(self):
        with pytest.raises(UnboundVariable):
            equivalent_on_small_frames(parse_fo("R(x,y)"), parse_fo("true"), 2)

    def test_vssi_raw_equivalence_from_example(self):
        raw = parse_fo(
            "all z1. all z2. ((x = z1 | x = z2) & "
            "(exists y. (R(x,y) & (y = z1 | y = z2))) -> "
            "(all u. (R(x,u) -> u = z1 | u = z2)))"
        )
        target = parse_fo("all z. all u. (R(x,z) & R(x,u) -> z = u)")
        assert equivalent_on_small_frames(raw, target, 3) is None
