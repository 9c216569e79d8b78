"""Polarity, decomposition, digraphs, and class assignment."""

import random

import pytest

from modalcorr import fastcheck, modal
from modalcorr.classify import (
    AtomicBoxFormula,
    DependencyDigraph,
    Polarity,
    SyntacticClass,
    classify,
    decompose_antecedent,
    decompose_atomic_box_formula,
    dependency_digraph,
    is_negative_formula,
    is_positive_formula,
    polarity_map,
    serialize_report,
    topological_order,
)
from modalcorr.errors import NotRegularAntecedent
from modalcorr.modal import Not, parse_modal

from genformulas import random_definite_implication, random_formula

PHI1 = parse_modal("p & [](p -> []q) -> <>[][]q")
PHI2 = parse_modal("<>[]p & <>([](p -> q) | [](p -> [][]r)) -> <>[](q | <>r)")
PHI3 = parse_modal("<>([](p -> [][]q) | [](q -> []p)) -> <>[]p")
MCKINSEY = parse_modal("[]<>p -> <>[]p")
K_REGROUPED = parse_modal("[](p -> q) & []p -> []q")


class TestPolarity:
    def test_uniform_positive(self):
        assert polarity_map(parse_modal("[]<>p")) == {"p": Polarity.POSITIVE}

    def test_both(self):
        assert polarity_map(parse_modal("p -> <>p")) == {"p": Polarity.BOTH}

    def test_negative(self):
        assert polarity_map(parse_modal("~p")) == {"p": Polarity.NEGATIVE}

    def test_iff_makes_both(self):
        pol = polarity_map(parse_modal("p <-> q"))
        assert pol == {"p": Polarity.BOTH, "q": Polarity.BOTH}

    def test_duality(self):
        rng = random.Random(47)
        flip = {
            Polarity.POSITIVE: Polarity.NEGATIVE,
            Polarity.NEGATIVE: Polarity.POSITIVE,
            Polarity.BOTH: Polarity.BOTH,
        }
        for _ in range(200):
            f = random_formula(rng, depth=3)
            pol = polarity_map(f)
            neg = polarity_map(Not(f))
            assert neg == {k: flip[v] for k, v in pol.items()}

    def test_negative_positive_predicates(self):
        assert is_negative_formula(parse_modal("~p | ~<>q"))
        assert is_positive_formula(parse_modal("[]<>(p & q)"))
        f = parse_modal("p -> q")
        assert not is_negative_formula(f) and not is_positive_formula(f)
        # constants are vacuously both
        assert is_negative_formula(parse_modal("true"))
        assert is_positive_formula(parse_modal("[]false"))


class TestBoxFormulaDecomposition:
    def test_nested(self):
        abf = decompose_atomic_box_formula(parse_modal("[](p -> [][]q)"))
        assert abf == AtomicBoxFormula(("p",), 2, "q")

    def test_boxed_atom(self):
        assert decompose_atomic_box_formula(parse_modal("[][]q")) == AtomicBoxFormula(
            (), 2, "q"
        )

    def test_bare_letter(self):
        assert decompose_atomic_box_formula(parse_modal("q")) == AtomicBoxFormula(
            (), 0, "q"
        )

    def test_non_matching(self):
        assert decompose_atomic_box_formula(parse_modal("[](p & q)")) is None
        assert decompose_atomic_box_formula(parse_modal("[][](p -> q)")) is None
        assert decompose_atomic_box_formula(parse_modal("<>p")) is None

    def test_repeated_inessential(self):
        abf = decompose_atomic_box_formula(parse_modal("[](p -> [](p -> []q))"))
        assert abf == AtomicBoxFormula(("p", "p"), 1, "q")

    def test_formula_round_trip(self):
        rng = random.Random(53)
        for _ in range(100):
            rho = tuple(rng.choice("pq") for _ in range(rng.randint(0, 3)))
            abf = AtomicBoxFormula(rho, rng.randint(0, 3), rng.choice("pqr"))
            assert decompose_atomic_box_formula(abf.formula()) == abf


class TestDigraph:
    def test_phi1(self):
        g = dependency_digraph(PHI1.lhs)
        assert g.vertices == {"p", "q"}
        assert g.edges == {("p", "q")}

    def test_phi2(self):
        g = dependency_digraph(PHI2.lhs)
        assert g.edges == {("p", "q"), ("p", "r")}

    def test_phi3_cycle(self):
        g = dependency_digraph(PHI3.lhs)
        assert {("p", "q"), ("q", "p")} <= g.edges

    def test_not_regular(self):
        with pytest.raises(NotRegularAntecedent):
            dependency_digraph(parse_modal("[]<>p"))

    def test_soundness_by_rescan(self):
        rng = random.Random(59)
        for _ in range(100):
            imp = random_definite_implication(rng, SyntacticClass.AII)
            decomp = decompose_antecedent(imp.lhs)
            g = DependencyDigraph.from_chis(decomp.chis)
            heads = {s.abf.head for s in decomp.chis}
            expected = {
                (r, s.abf.head)
                for s in decomp.chis
                for r in s.abf.rho
                if r in heads
            }
            assert g.vertices == heads
            assert g.edges == expected


class TestTopologicalOrder:
    def test_single_edge(self):
        g = DependencyDigraph(frozenset({"p", "q"}), frozenset({("p", "q")}))
        assert topological_order(g) == ["p", "q"]

    def test_isolated_vertex(self):
        g = DependencyDigraph(frozenset({"p"}), frozenset())
        assert topological_order(g) == ["p"]

    def test_cycle(self):
        g = DependencyDigraph(
            frozenset({"p", "q"}), frozenset({("p", "q"), ("q", "p")})
        )
        assert topological_order(g) is None

    def test_self_loop(self):
        g = DependencyDigraph(frozenset({"p"}), frozenset({("p", "p")}))
        assert topological_order(g) is None

    def test_alphabetical_ties(self):
        g = DependencyDigraph(frozenset({"c", "a", "b"}), frozenset({("c", "a")}))
        assert topological_order(g) == ["b", "c", "a"]


class TestClassify:
    def test_phi1_is_aii_not_si(self):
        rep = classify(PHI1)
        assert rep.syntactic_class is SyntacticClass.AII
        assert rep.definite
        assert any(s.abf.rho for s in rep.decomposition.chis)

    def test_sahl_example_si_definite(self):
        rep = classify(parse_modal("<>[]p & []q -> []<>(p & q)"))
        assert rep.syntactic_class is SyntacticClass.SI
        assert rep.definite

    def test_mckinsey_unclassified(self):
        rep = classify(MCKINSEY)
        assert rep.syntactic_class is SyntacticClass.UNCLASSIFIED
        assert not rep.supported

    def test_phi3_atomic_regular(self):
        rep = classify(PHI3)
        assert rep.syntactic_class is SyntacticClass.ATOMIC_REGULAR_IMP
        assert rep.order is None

    def test_vssi(self):
        assert classify(parse_modal("p & <>p -> []p")).syntactic_class is SyntacticClass.VSSI

    def test_closed_uniform(self):
        assert classify(parse_modal("[]false")).syntactic_class is SyntacticClass.CLOSED
        assert classify(parse_modal("[]<>p")).syntactic_class is SyntacticClass.UNIFORM

    def test_composed(self):
        assert classify(parse_modal("[](p -> <>p)")).syntactic_class is SyntacticClass.SF
        assert (
            classify(parse_modal("[](p & [](p -> q) -> <>q)")).syntactic_class
            is SyntacticClass.AIF
        )

    def test_class_inclusions_on_corpus(self):
        """Every VSSI decomposes with boxed atoms only; every SI has an
        edge-free digraph; every SI/VSSI is acyclic."""
        rng = random.Random(61)
        for target in (SyntacticClass.VSSI, SyntacticClass.SI, SyntacticClass.AII):
            for _ in range(40):
                imp = random_definite_implication(rng, target)
                rep = classify(imp)
                assert rep.syntactic_class is target
                chis = rep.decomposition.chis
                if target is SyntacticClass.VSSI:
                    assert all(s.abf.rho == () and s.abf.boxes == 0 for s in chis)
                if target in (SyntacticClass.VSSI, SyntacticClass.SI):
                    assert all(s.abf.rho == () for s in chis)
                    assert rep.digraph.edges == frozenset()
                assert rep.order is not None

    def test_skeleton_reassembly(self):
        """Rebuilding the skeleton with its slot contents reproduces the
        antecedent exactly, hence extension-equal on all models."""
        rng = random.Random(67)
        for target in (SyntacticClass.VSSI, SyntacticClass.SI, SyntacticClass.AII):
            for _ in range(30):
                imp = random_definite_implication(rng, target)
                decomp = decompose_antecedent(imp.lhs)
                assert decomp.reassemble() == imp.lhs

    def test_reassembly_extension_equal_small_frames(self):
        rng = random.Random(71)
        rels = fastcheck.rel_tensor(3, range(512))
        for _ in range(10):
            imp = random_definite_implication(rng, SyntacticClass.AII)
            decomp = decompose_antecedent(imp.lhs)
            import numpy as np

            letters = modal.prop_letters(imp.lhs)
            a = fastcheck.modal_extension(rels, imp.lhs, letters)
            b = fastcheck.modal_extension(rels, decomp.reassemble(), letters)
            assert np.array_equal(a, b)

    def test_gamma_freezing_maximal(self):
        rep = classify(parse_modal("(~p | ~q) & p & q -> <>p"))
        gammas = rep.decomposition.gammas
        assert [modal.print_modal(s.formula) for s in gammas] == ["~p | ~q"]
        assert rep.definite  # the | sits inside a frozen negative part


class TestSerialization:
    def test_stable_report(self):
        text = serialize_report(classify(PHI1))
        assert text == (
            "formula: p & [](p -> []q) -> <>[][]q\n"
            "class: AII\n"
            "definite: yes\n"
            "polarity: p=both, q=both\n"
            "box-formulas: p (rho=[], k=0, head=p); [](p -> []q) (rho=[p], k=1, head=q)\n"
            "negative-parts: (none)\n"
            "digraph: p->q\n"
            "order: p, q"
        )

    def test_unsupported_never_claims_nonelementarity(self):
        text = serialize_report(classify(MCKINSEY))
        assert "no elementarity claim" in text
        assert "not elementary" not in text
