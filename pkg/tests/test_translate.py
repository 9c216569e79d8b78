"""Standard translation and its adequacy on small models."""

import random

from modalcorr import fastcheck, fol, semantics, translate
from modalcorr.fol import bound_vars, free_vars, print_fo
from modalcorr.modal import parse_modal
from modalcorr.translate import second_order_translation, standard_translation

from genformulas import random_formula


class TestClauses:
    def test_letter(self):
        assert print_fo(standard_translation(parse_modal("p"))) == "P(x)"

    def test_bottom_is_inequality(self):
        assert print_fo(standard_translation(parse_modal("false"))) == "~(x = x)"

    def test_box_bottom(self):
        st = standard_translation(parse_modal("[]false"))
        assert print_fo(st) == "all y0. (R(x,y0) -> ~(y0 = y0))"

    def test_dia(self):
        st = standard_translation(parse_modal("<>p"))
        assert print_fo(st) == "exists y0. (R(x,y0) & P(y0))"

    def test_fresh_variable_per_operator(self):
        st = standard_translation(parse_modal("<>p & <>p"))
        assert print_fo(st) == "(exists y0. (R(x,y0) & P(y0))) & (exists y1. (R(x,y1) & P(y1)))"


class TestShape:
    def test_one_free_variable(self):
        rng = random.Random(31)
        for _ in range(100):
            f = random_formula(rng, depth=3)
            st = standard_translation(f)
            assert free_vars(st) <= {"x"}

    def test_bound_variables_distinct(self):
        rng = random.Random(37)
        for _ in range(100):
            f = random_formula(rng, depth=3)
            st = standard_translation(f)
            seen = []

            def walk(g):
                if isinstance(g, (fol.Forall, fol.Exists)):
                    seen.append(g.var)
                    walk(g.body)
                elif isinstance(g, fol.Not):
                    walk(g.body)
                elif isinstance(g, (fol.And, fol.Or)):
                    for h in g.parts:
                        walk(h)
                elif isinstance(g, fol.Implies):
                    walk(g.lhs)
                    walk(g.rhs)

            walk(st)
            assert len(seen) == len(set(seen))
            assert set(seen) == bound_vars(st)


class TestSecondOrder:
    def test_prefix_first_occurrence_order(self):
        so = second_order_translation(parse_modal("<>[]p & []q -> []<>(p & q)"))
        assert so.prefix == ("P", "Q")

    def test_closed_prefix_empty(self):
        so = second_order_translation(parse_modal("[]false"))
        assert so.prefix == ()

    def test_example_text(self):
        so = second_order_translation(parse_modal("p -> <>p"))
        assert print_fo(so) == "all P. (P(x) -> (exists y0. (R(x,y0) & P(y0))))"


class TestAdequacy:
    def test_st_adequacy_random(self):
        """Model-level: truth of f equals truth of ST under the induced
        interpretation, all frames of size <= 3, all valuations."""
        rng = random.Random(41)
        for n in (1, 2, 3):
            rels = fastcheck.rel_tensor(n, range(1 << (n * n)))
            for _ in range(15):
                f = random_formula(rng, depth=2)
                st = standard_translation(f)
                assert fastcheck.st_adequate(rels, f, st)

    def test_so_adequacy_random(self):
        """Frame-level: frame validity equals truth of the second-order
        translation, all frames of size <= 3."""
        rng = random.Random(43)
        for n in (1, 2, 3):
            rels = fastcheck.rel_tensor(n, range(1 << (n * n)))
            for _ in range(10):
                f = random_formula(rng, ("p",), depth=2)
                so = second_order_translation(f)
                import numpy as np

                assert np.array_equal(
                    fastcheck.modal_validity(rels, f), fastcheck.so_validity(rels, so)
                )

    def test_adequacy_pointwise_spot(self):
        f = parse_modal("p -> <>p")
        st = standard_translation(f)
        fr = semantics.Frame.from_literal("2;0->1")
        for vp in range(4):
            for w in range(2):
                modal_truth = bool(semantics.extension(f, fr, {"p": vp}) & (1 << w))
                fo_truth = semantics.eval_fo(fr, {"x": w}, st, {"P": vp})
                assert modal_truth == fo_truth
