"""Reduction strategies and the correspondence pipeline."""

import random

import pytest

from modalcorr import fol, modal
from modalcorr.classify import SyntacticClass, classify
from modalcorr.correspond import (
    BoxAtomUnion,
    ConstEmpty,
    FiniteSet,
    InductiveUnion,
    compose_box,
    compose_conjunction,
    compose_disjoint_disjunction,
    correspond,
    correspond_aii,
    correspond_si,
    correspond_uniform,
    correspond_vssi,
    rpath,
)
from modalcorr.errors import CyclicDigraph, NotInClass, NotUniform, SharedLetters, Unsupported
from modalcorr.fol import VarGen, free_vars, parse_fo, print_fo
from modalcorr.fosimp import equivalent_on_small_frames
from modalcorr.modal import parse_modal
from modalcorr.semantics import check_local_correspondence
from modalcorr.translate import standard_translation

from genformulas import random_definite_implication


def oracle_ok(text: str, max_n: int = 3, sample4: int = 0) -> bool:
    f = parse_modal(text)
    res = correspond(f)
    return check_local_correspondence(f, res.combined, max_n, sample4=sample4) is None


class TestRpath:
    def test_zero_is_equality(self):
        assert rpath("a", "b", 0, VarGen()) == fol.Eq("a", "b")

    def test_one_is_relation(self):
        assert rpath("a", "b", 1, VarGen()) == fol.Rel("a", "b")

    def test_two_is_chain(self):
        assert print_fo(rpath("a", "b", 2, VarGen())) == "exists v0. (R(a,v0) & R(v0,b))"


class TestVssi:
    def test_worked_example_raw(self):
        scheme, raw = correspond_vssi(parse_modal("p & <>p -> []p"))
        assert scheme == {"p": FiniteSet(("z1", "z2"))}
        assert print_fo(raw) == (
            "all z1. all z2. ((x = z1 | x = z2) & "
            "(exists y0. (R(x,y0) & (y0 = z1 | y0 = z2))) -> "
            "(all y1. (R(x,y1) -> y1 = z1 | y1 = z2)))"
        )

    def test_single_occurrence(self):
        scheme, raw = correspond_vssi(parse_modal("p -> <>p"))
        assert scheme == {"p": FiniteSet(("z1",))}
        assert equivalent_on_small_frames(raw, parse_fo("R(x,x)"), 3) is None

    def test_rejects_letter_without_positive_occurrence(self):
        with pytest.raises(NotInClass):
            correspond_vssi(parse_modal("~q & p -> <>p"))

    def test_rejects_other_classes(self):
        with pytest.raises(NotInClass):
            correspond_vssi(parse_modal("[]p -> p"))

    def test_scheme_size_matches_occurrences(self):
        rng = random.Random(127)
        for _ in range(30):
            imp = random_definite_implication(rng, SyntacticClass.VSSI)
            rep = classify(imp)
            scheme, raw = correspond_vssi(imp)
            for letter, value in scheme.items():
                count = sum(1 for s in rep.decomposition.chis if s.abf.head == letter)
                assert len(value.params) == count
            assert free_vars(raw) <= {"x"}


class TestSi:
    def test_worked_example_raw(self):
        scheme, raw = correspond_si(parse_modal("<>[]p & []q -> []<>(p & q)"))
        assert scheme == {
            "p": BoxAtomUnion((("z1", 1),)),
            "q": BoxAtomUnion((("z2", 1),)),
        }
        assert print_fo(raw) == (
            "all z1. all z2. ((exists y0. (R(x,y0) & (all y1. (R(y0,y1) -> R(z1,y1))))) & "
            "(all y2. (R(x,y2) -> R(z2,y2))) -> "
            "(all y3. (R(x,y3) -> (exists y4. (R(y3,y4) & (R(z1,y4) & R(z2,y4)))))))"
        )

    def test_box_reflexivity(self):
        _, raw = correspond_si(parse_modal("[]p -> p"))
        assert equivalent_on_small_frames(raw, parse_fo("R(x,x)"), 3) is None

    def test_density(self):
        _, raw = correspond_si(parse_modal("[][]p -> []p"))
        dense = parse_fo("all y. (R(x,y) -> exists u. (R(x,u) & R(u,y)))")
        assert equivalent_on_small_frames(raw, dense, 3) is None


class TestAii:
    def test_worked_example(self):
        scheme, alphas, raw = correspond_aii(parse_modal("p & [](p -> q) -> <>q"))
        assert scheme == {
            "p": InductiveUnion((("z1", (), 0),)),
            "q": InductiveUnion((("z2", ("p",), 0),)),
        }
        shown = {a.letter: str(a) for a in alphas}
        assert shown["p"] == "alpha_p(y) = z1 = y"
        assert shown["q"] == (
            "alpha_q(y) = exists v0. exists v1. (z2 = v0 & R(v0,v1) & z1 = v1 & v1 = y)"
        )
        assert equivalent_on_small_frames(raw, parse_fo("R(x,x)"), 3) is None

    def test_phi1_wellformed_and_sound(self):
        f = parse_modal("p & [](p -> []q) -> <>[][]q")
        scheme, alphas, raw = correspond_aii(f)
        assert free_vars(raw) <= {"x"}
        assert check_local_correspondence(f, raw, 3) is None

    def test_k_axiom_valid(self):
        f = parse_modal("[](p -> q) & []p -> []q")
        _, _, raw = correspond_aii(f)
        assert equivalent_on_small_frames(raw, parse_fo("true"), 3) is None

    def test_cyclic_rejected(self):
        with pytest.raises(CyclicDigraph):
            correspond_aii(parse_modal("[](p -> []q) & [](q -> []p) -> <>p"))

    def test_non_definite_rejected(self):
        with pytest.raises(NotInClass):
            correspond_aii(parse_modal("(p | q) & [](p -> q) -> <>q"))

    def test_scheme_entries_match_occurrences(self):
        rng = random.Random(211)
        for target, op in (
            (SyntacticClass.SI, correspond_si),
            (SyntacticClass.AII, correspond_aii),
        ):
            for _ in range(20):
                imp = random_definite_implication(rng, target)
                rep = classify(imp)
                out = op(imp)
                scheme = out[0]
                for letter, value in scheme.items():
                    count = sum(
                        1 for s in rep.decomposition.chis if s.abf.head == letter
                    )
                    assert len(value.entries) == count

    def test_aii_alpha_parameters_respect_order(self):
        rng = random.Random(223)
        for _ in range(20):
            imp = random_definite_implication(rng, SyntacticClass.AII)
            rep = classify(imp)
            scheme, alphas, _ = correspond_aii(imp)
            order = list(rep.order)
            z_owner = {
                z: head
                for head, value in scheme.items()
                for z, _, _ in value.entries
            }
            for alpha in alphas:
                for var in fol.free_vars(alpha.body) - {alpha.hole}:
                    owner = z_owner[var]
                    assert order.index(owner) <= order.index(alpha.letter)


class TestUniformOp:
    def test_box_dia_p(self):
        out = correspond_uniform(parse_modal("[]<>p"))
        assert print_fo(out) == "all y0. (R(x,y0) -> (exists y1. (R(y0,y1) & ~(y1 = y1))))"
        assert equivalent_on_small_frames(out, parse_fo("all y. ~R(x,y)"), 3) is None

    def test_box_false(self):
        out = correspond_uniform(parse_modal("[]false"))
        assert print_fo(out) == "all y0. (R(x,y0) -> ~(y0 = y0))"

    def test_dia_true(self):
        out = correspond_uniform(parse_modal("<>true"))
        assert print_fo(out) == "exists y0. (R(x,y0) & y0 = y0)"

    def test_negative_letter_full(self):
        out = correspond_uniform(parse_modal("~p"))
        assert print_fo(out) == "~(x = x)"
        assert equivalent_on_small_frames(out, parse_fo("false"), 2) is None

    def test_not_uniform(self):
        with pytest.raises(NotUniform):
            correspond_uniform(parse_modal("p -> <>p"))


class TestComposition:
    def test_conjunction(self):
        a, b = parse_fo("R(x,x)"), parse_fo("x = x")
        assert compose_conjunction([a]) == a
        assert compose_conjunction([a, b]) == fol.And((a, b))
        assert compose_conjunction([]) == fol.TRUE

    def test_box(self):
        assert print_fo(compose_box(parse_fo("R(x,x)"), 1)) == "all y0. (R(x,y0) -> R(y0,y0))"
        alpha = parse_fo("all y. ~R(x,y)")
        assert compose_box(alpha, 0) == alpha
        assert (
            print_fo(compose_box(alpha, 1))
            == "all y0. (R(x,y0) -> (all v0. ~R(y0,v0)))"
        )

    def test_box_semantics(self):
        # if alpha corresponds to f, the composed form corresponds to []f
        f = parse_modal("[](p -> <>p)")
        alpha = compose_box(parse_fo("R(x,x)"), 1)
        assert check_local_correspondence(f, alpha, 3) is None

    def test_box_two_steps(self):
        f = parse_modal("[][](p -> <>p)")
        alpha = compose_box(parse_fo("R(x,x)"), 2)
        assert check_local_correspondence(f, alpha, 3) is None

    def test_disjoint_disjunction(self):
        a = parse_modal("p -> <>p")
        closed = parse_modal("[]false")
        alpha = compose_disjoint_disjunction(
            [(a, parse_fo("R(x,x)")), (closed, parse_fo("all y. ~R(x,y)"))]
        )
        assert check_local_correspondence(modal.Or(a, closed), alpha, 3) is None

    def test_singleton(self):
        a = parse_modal("p -> <>p")
        assert compose_disjoint_disjunction([(a, parse_fo("R(x,x)"))]) == parse_fo("R(x,x)")

    def test_shared_letters(self):
        a = parse_modal("p -> <>p")
        with pytest.raises(SharedLetters):
            compose_disjoint_disjunction([(a, fol.TRUE), (a, fol.TRUE)])


class TestPipeline:
    def test_reflexivity_axiom(self):
        res = correspond(parse_modal("[]p -> p"))
        assert equivalent_on_small_frames(res.combined, parse_fo("R(x,x)"), 3) is None

    def test_unsupported_carries_report(self):
        with pytest.raises(Unsupported) as exc:
            correspond(parse_modal("[]<>p -> <>[]p"))
        assert exc.value.report.syntactic_class is SyntacticClass.UNCLASSIFIED

    def test_atomic_regular_refused(self):
        with pytest.raises(Unsupported) as exc:
            correspond(parse_modal("<>([](p -> [][]q) | [](q -> []p)) -> <>[]p"))
        assert exc.value.report.syntactic_class is SyntacticClass.ATOMIC_REGULAR_IMP

    def test_closed_raw_is_plain_translation(self):
        f = parse_modal("[]false")
        res = correspond(f)
        assert res.conjuncts[0].raw == standard_translation(f)
        assert print_fo(res.combined) == "all y0. ~R(x,y0)"

    def test_uniform_records_elimination(self):
        res = correspond(parse_modal("[]<>p"))
        assert res.eliminated_uniform == {"p": modal.BOTTOM}
        assert res.class_used is SyntacticClass.UNIFORM

    def test_combined_free_variables(self):
        rng = random.Random(131)
        for target in (SyntacticClass.VSSI, SyntacticClass.SI, SyntacticClass.AII):
            for _ in range(10):
                imp = random_definite_implication(rng, target)
                res = correspond(imp)
                assert free_vars(res.combined) <= {"x"}
                for c in res.conjuncts:
                    assert free_vars(c.raw) <= {"x"}

    def test_non_definite_splits(self):
        res = correspond(
            parse_modal("<>[]p & <>([](p -> q) | [](p -> [][]r)) -> <>[](q | <>r)")
        )
        assert len(res.conjuncts) == 2
        assert all(classify(c.implication).definite for c in res.conjuncts)

    def test_sf_reduction(self):
        f = parse_modal("[](p -> <>p)")
        res = correspond(f)
        assert res.class_used is SyntacticClass.SF
        assert check_local_correspondence(f, res.combined, 3) is None

    def test_aif_reduction(self):
        f = parse_modal("[](p & [](p -> q) -> <>q)")
        res = correspond(f)
        assert res.class_used is SyntacticClass.AIF
        assert check_local_correspondence(f, res.combined, 3) is None

    def test_uniform_letter_inside_box_form(self):
        # p occurs only inessentially, so it is uniform in the implication;
        # the scheme handles it as a constant without breaking the shape
        f = parse_modal("[](p -> []q) -> <>q")
        res = correspond(f)
        conj = res.conjuncts[0]
        assert isinstance(conj.scheme["p"], ConstEmpty)
        assert check_local_correspondence(f, res.combined, 3) is None

    def test_geach_axiom(self):
        f = parse_modal("<>[]p -> []<>p")
        res = correspond(f)
        confluence = parse_fo(
            "all y. all w. (R(x,y) & R(x,w) -> exists s. (R(y,s) & R(w,s)))"
        )
        assert equivalent_on_small_frames(res.combined, confluence, 3) is None

    def test_transitivity(self):
        f = parse_modal("<><>p -> <>p")
        res = correspond(f)
        trans = parse_fo("all y. all z. (R(x,y) & R(y,z) -> R(x,z))")
        assert equivalent_on_small_frames(res.combined, trans, 3) is None

    def test_symmetry(self):
        f = parse_modal("p -> []<>p")
        res = correspond(f)
        sym = parse_fo("all y. (R(x,y) -> R(y,x))")
        assert equivalent_on_small_frames(res.combined, sym, 3) is None

    def test_seriality(self):
        f = parse_modal("[]p -> <>p")
        res = correspond(f)
        serial = parse_fo("exists y. R(x,y)")
        assert equivalent_on_small_frames(res.combined, serial, 3) is None
