"""Minimal-valuation reduction: from classified modal formulas to local
first-order frame correspondents.

The pipeline splits the input into definite implications and picks, per
conjunct, the restricted valuation class its shape supports: finite
sets for very simple Sahlqvist antecedents (one fresh parameter per
positive letter occurrence), unions of k-step relation images of points
for boxed atoms, and inductively-built unions for atomic box-formulas,
where each letter's defining formula may mention the definitions of
letters earlier in the dependency order.  Substituting the definitions
for the predicate symbols in the standard translation and universally
quantifying the parameters eliminates the second-order prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from . import classify, fol, fosimp, modal, normalize, translate
from .errors import CyclicDigraph, NotInClass, NotUniform, SharedLetters, Unsupported


# ---------------------------------------------------------------------------
# Tame valuation schemes


@dataclass(frozen=True)
class ConstEmpty:
    """The letter denotes the empty set (positively uniform letter)."""


@dataclass(frozen=True)
class ConstFull:
    """The letter denotes the full set (negatively uniform letter)."""


@dataclass(frozen=True)
class FiniteSet:
    """A set of at most len(params) points, one parameter per positive
    occurrence of the letter."""

    params: tuple[str, ...]


@dataclass(frozen=True)
class BoxAtomUnion:
    """Union of k-step successor images of single points: one (z, k)
    entry per boxed-atom occurrence of the letter."""

    entries: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class InductiveUnion:
    """Union of direct images of points under chain relations: one
    (z, rho, k) entry per box-formula occurrence with this head."""

    entries: tuple[tuple[str, tuple[str, ...], int], ...]


SchemeValue = Union[ConstEmpty, ConstFull, FiniteSet, BoxAtomUnion, InductiveUnion]
TameScheme = dict[str, SchemeValue]


@dataclass(frozen=True)
class PredDefinition:
    """First-order definition substituted for a predicate symbol: the
    body has one designated hole variable plus the z parameters free."""

    letter: str
    hole: str
    body: fol.FO

    def instantiate(self, target: str, gen: fol.VarGen) -> fol.FO:
        fresh = fol.freshen_bound(self.body, gen, series="v")
        return fol.subst_var(fresh, {self.hole: target})

    def __str__(self) -> str:
        return f"alpha_{self.letter}({self.hole}) = {fol.print_fo(self.body)}"


def rpath(src: str, dst: str, k: int, gen: fol.VarGen) -> fol.FO:
    """There is an R-path from src to dst in exactly k steps; k = 0 is
    equality and the chain variables are fresh."""
    if k == 0:
        return fol.Eq(src, dst)
    hops = [src] + [gen.fresh("v") for _ in range(k - 1)] + [dst]
    body: fol.FO = fol.conj(
        fol.Rel(a, b) for a, b in zip(hops, hops[1:])
    )
    for var in reversed(hops[1:-1]):
        body = fol.Exists(var, body)
    return body


# ---------------------------------------------------------------------------
# Per-class strategies


def _occurrences(decomp: classify.AntecedentDecomposition) -> dict[str, list]:
    occ: dict[str, list[classify.AtomicBoxFormula]] = {}
    for slot in decomp.chis:
        occ.setdefault(slot.abf.head, []).append(slot.abf)
    return occ


def _build_strategy(
    imp: modal.Formula,
    cls: classify.SyntacticClass,
    decomp: classify.AntecedentDecomposition,
    order: Optional[tuple[str, ...]],
    allow_const: bool,
) -> tuple[TameScheme, list[PredDefinition], fol.FO]:
    pol = classify.polarity_map(imp)
    letters = modal.prop_letters(imp)
    occ = _occurrences(decomp)

    scheme: TameScheme = {}
    const_letters: list[str] = []
    for letter in letters:
        if letter not in occ:
            p = pol[letter]
            if p is classify.Polarity.BOTH or not allow_const:
                raise NotInClass(
                    f"letter {letter} has no positive antecedent occurrence"
                )
            scheme[letter] = (
                ConstEmpty() if p is classify.Polarity.POSITIVE else ConstFull()
            )
            const_letters.append(letter)

    if cls is classify.SyntacticClass.AII:
        if order is None:
            raise CyclicDigraph("dependency digraph has a cycle")
        head_order = [h for h in order if h in occ]
    else:
        head_order = list(occ)

    gen = fol.VarGen()
    z_order: list[str] = []
    for head in head_order:
        if cls is classify.SyntacticClass.VSSI:
            params = tuple(gen.fresh("z") for _ in occ[head])
            scheme[head] = FiniteSet(params)
            z_order.extend(params)
        elif cls is classify.SyntacticClass.SI:
            entries = tuple((gen.fresh("z"), abf.boxes) for abf in occ[head])
            scheme[head] = BoxAtomUnion(entries)
            z_order.extend(z for z, _ in entries)
        else:
            entries = tuple(
                (gen.fresh("z"), abf.rho, abf.boxes) for abf in occ[head]
            )
            scheme[head] = InductiveUnion(entries)
            z_order.extend(z for z, _, _ in entries)

    alphas: dict[str, PredDefinition] = {}
    for letter in const_letters:
        body = (
            fol.Not(fol.Eq("y", "y"))
            if isinstance(scheme[letter], ConstEmpty)
            else fol.Eq("y", "y")
        )
        alphas[letter] = PredDefinition(letter, "y", body)
    local = fol.VarGen()
    for head in head_order:
        value = scheme[head]
        if isinstance(value, FiniteSet):
            body = fol.disj(fol.Eq("y", z) for z in value.params)
        elif isinstance(value, BoxAtomUnion):
            body = fol.disj(rpath(z, "y", k, local) for z, k in value.entries)
        else:
            parts = []
            for z, rho, k in value.entries:
                if not rho:
                    parts.append(rpath(z, "y", k, local))
                    continue
                hops = [local.fresh("v") for _ in range(len(rho) + 1)]
                conjs: list[fol.FO] = [fol.Eq(z, hops[0])]
                for j, letter in enumerate(rho):
                    conjs.append(fol.Rel(hops[j], hops[j + 1]))
                    conjs.append(alphas[letter].instantiate(hops[j + 1], local))
                conjs.append(rpath(hops[-1], "y", k, local))
                chain: fol.FO = fol.conj(conjs)
                for var in reversed(hops):
                    chain = fol.Exists(var, chain)
                parts.append(chain)
            body = fol.disj(parts)
        alphas[head] = PredDefinition(head, "y", body)

    so = translate.second_order_translation(imp)
    sym_to_letter = {fol.pred_sym(p): p for p in letters}
    inst_gen = fol.VarGen()

    def define(sym: str, target: str) -> fol.FO:
        return alphas[sym_to_letter[sym]].instantiate(target, inst_gen)

    raw = fol.substitute_predicates(so.matrix, define)
    for z in reversed(z_order):
        raw = fol.Forall(z, raw)
    ordered_alphas = [alphas[p] for p in letters]
    return scheme, ordered_alphas, raw


def _strict_class_check(
    imp: modal.Formula, wanted: set[classify.SyntacticClass]
) -> classify.ClassificationReport:
    report = classify.classify(imp)
    if report.syntactic_class not in wanted:
        raise NotInClass(
            f"classified as {report.syntactic_class.name}, "
            f"expected one of {sorted(c.name for c in wanted)}"
        )
    if not report.definite:
        raise NotInClass("the antecedent is not definite (it distributes over |)")
    return report


def correspond_vssi(imp: modal.Formula) -> tuple[TameScheme, fol.FO]:
    """Finite-set valuations for definite very simple Sahlqvist
    implications: each positive letter occurrence contributes one
    universally quantified point."""
    report = _strict_class_check(imp, {classify.SyntacticClass.VSSI})
    scheme, _, raw = _build_strategy(
        imp, classify.SyntacticClass.VSSI, report.decomposition, report.order, False
    )
    return scheme, raw


def correspond_si(imp: modal.Formula) -> tuple[TameScheme, fol.FO]:
    """Boxed-atom valuations for definite Sahlqvist implications: each
    occurrence []^k p contributes the k-step image of a fresh point."""
    report = _strict_class_check(
        imp, {classify.SyntacticClass.VSSI, classify.SyntacticClass.SI}
    )
    scheme, _, raw = _build_strategy(
        imp, classify.SyntacticClass.SI, report.decomposition, report.order, False
    )
    return scheme, raw


def correspond_aii(
    imp: modal.Formula,
) -> tuple[TameScheme, list[PredDefinition], fol.FO]:
    """Inductive valuations for definite atomic inductive implications,
    built along the topological order of the dependency digraph."""
    report = classify.classify(imp)
    if report.syntactic_class is classify.SyntacticClass.ATOMIC_REGULAR_IMP:
        raise CyclicDigraph("dependency digraph has a cycle")
    if report.syntactic_class not in (
        classify.SyntacticClass.VSSI,
        classify.SyntacticClass.SI,
        classify.SyntacticClass.AII,
    ):
        raise NotInClass(f"classified as {report.syntactic_class.name}")
    if not report.definite:
        raise NotInClass("the antecedent is not definite (it distributes over |)")
    scheme, alphas, raw = _build_strategy(
        imp, classify.SyntacticClass.AII, report.decomposition, report.order, False
    )
    return scheme, alphas, raw


def correspond_uniform(f: modal.Formula) -> fol.FO:
    """Constant valuations for uniform formulas: positive letters read
    as the empty set, negative letters as the full set, leaving the
    standard translation predicate-free."""
    pol = classify.polarity_map(f)
    both = [p for p, v in pol.items() if v is classify.Polarity.BOTH]
    if both:
        raise NotUniform(f"letters occur with both polarities: {', '.join(both)}")
    st = translate.standard_translation(f)

    def define(sym: str, target: str) -> fol.FO:
        letter = next(p for p in pol if fol.pred_sym(p) == sym)
        if pol[letter] is classify.Polarity.POSITIVE:
            return fol.Not(fol.Eq(target, target))
        return fol.Eq(target, target)

    return fol.substitute_predicates(st, define)


# ---------------------------------------------------------------------------
# Composition rules


def compose_conjunction(parts: list[fol.FO]) -> fol.FO:
    """A conjunction of formulas corresponds to the conjunction of their
    correspondents."""
    return fol.conj(parts)


def compose_box(alpha: fol.FO, k: int) -> fol.FO:
    """If alpha(x) corresponds to f, then all y (x R^k y -> alpha(y))
    corresponds to []^k f."""
    if k == 0:
        return alpha
    gen = fol.VarGen()
    y = gen.fresh("y")
    shifted = fol.subst_var(fol.freshen_bound(alpha, gen, series="v"), {"x": y})
    return fol.Forall(y, fol.Implies(rpath("x", y, k, gen), shifted))


def compose_disjoint_disjunction(
    pairs: list[tuple[modal.Formula, fol.FO]]
) -> fol.FO:
    """If the disjuncts share no proposition letters, a disjunction
    corresponds to the disjunction of the correspondents."""
    seen: dict[str, int] = {}
    for i, (g, _) in enumerate(pairs):
        for letter in modal.prop_letters(g):
            if letter in seen and seen[letter] != i:
                raise SharedLetters(f"letter {letter} occurs in two disjuncts")
            seen[letter] = i
    return fol.disj(alpha for _, alpha in pairs)


# ---------------------------------------------------------------------------
# The pipeline


@dataclass
class ConjunctResult:
    implication: modal.Formula
    strategy: classify.SyntacticClass
    scheme: TameScheme
    alphas: list[PredDefinition]
    raw: fol.FO
    simplified: fol.FO


@dataclass
class CorrespondenceResult:
    formula: modal.Formula
    report: classify.ClassificationReport
    eliminated_uniform: dict[str, modal.Formula]
    conjuncts: list[ConjunctResult]
    combined: fol.FO
    free_var: str = "x"

    @property
    def class_used(self) -> classify.SyntacticClass:
        return self.report.syntactic_class


def _uniform_conjunct(imp: modal.Formula) -> ConjunctResult:
    raw = correspond_uniform(imp)
    return ConjunctResult(
        imp, classify.SyntacticClass.UNIFORM, {}, [], raw, fosimp.simplify(raw)
    )


def _closed_conjunct(f: modal.Formula) -> ConjunctResult:
    raw = translate.standard_translation(f)
    return ConjunctResult(
        f, classify.SyntacticClass.CLOSED, {}, [], raw, fosimp.simplify(raw)
    )


def _conjunct_correspond(imp: modal.Formula) -> ConjunctResult:
    letters = modal.prop_letters(imp)
    if not letters:
        return _closed_conjunct(imp)
    pol = classify.polarity_map(imp)
    if all(p is not classify.Polarity.BOTH for p in pol.values()):
        return _uniform_conjunct(imp)
    report = classify.classify(imp)
    cls = report.syntactic_class
    if cls not in (
        classify.SyntacticClass.VSSI,
        classify.SyntacticClass.SI,
        classify.SyntacticClass.AII,
    ):
        raise Unsupported(report)
    scheme, alphas, raw = _build_strategy(
        imp, cls, report.decomposition, report.order, True
    )
    return ConjunctResult(imp, cls, scheme, alphas, raw, fosimp.simplify(raw))


def correspond(
    f: modal.Formula, max_conjuncts: int = normalize.DEFAULT_CONJUNCT_CAP
) -> CorrespondenceResult:
    """Compute a local first-order frame correspondent of f, or raise
    Unsupported carrying the classification report.

    A refusal never claims the input has no first-order correspondent:
    whether a modal formula is elementary is undecidable, so the engine
    only reports that no implemented strategy applies.
    """
    report = classify.classify(f)
    cls = report.syntactic_class
    eliminated: dict[str, modal.Formula] = {}
    for letter, p in report.polarity.items():
        if p is classify.Polarity.POSITIVE:
            eliminated[letter] = modal.BOTTOM
        elif p is classify.Polarity.NEGATIVE:
            eliminated[letter] = modal.TOP

    if cls is classify.SyntacticClass.CLOSED:
        conjunct = _closed_conjunct(f)
        return CorrespondenceResult(f, report, {}, [conjunct], conjunct.simplified)
    if cls is classify.SyntacticClass.UNIFORM:
        reduced, elim = normalize.eliminate_uniform_variables(f)
        conjunct = _closed_conjunct(reduced)
        return CorrespondenceResult(f, report, elim, [conjunct], conjunct.simplified)

    if cls in (
        classify.SyntacticClass.VSSI,
        classify.SyntacticClass.SI,
        classify.SyntacticClass.AII,
    ):
        imp = f
    elif cls in (classify.SyntacticClass.SF, classify.SyntacticClass.AIF):
        imp = modal.Implies(normalize.negate_to_antecedent(f), modal.BOTTOM)
    else:
        raise Unsupported(report)

    conjuncts = [
        _conjunct_correspond(c)
        for c in normalize.to_definite_implications(imp, max_conjuncts)
    ]
    combined = compose_conjunction([c.simplified for c in conjuncts])
    return CorrespondenceResult(f, report, eliminated, conjuncts, combined)
