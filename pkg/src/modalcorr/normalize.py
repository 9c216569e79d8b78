"""Rewrites into the normal forms the reduction strategies need:
negation normal form, negated-antecedent implications for composed
formulas, conjunctions of definite implications, and uniform-variable
elimination."""

from __future__ import annotations

from . import classify, modal
from .errors import ConjunctCapExceeded, NotInClass

#: default bound on the number of definite conjuncts produced by
#: distribution; exceeding it raises instead of truncating
DEFAULT_CONJUNCT_CAP = 256


def nnf(f: modal.Formula) -> modal.Formula:
    """Negation normal form: negations pushed onto letters, no -> or <->.
    Extension-preserving on every model."""

    def pos(g: modal.Formula) -> modal.Formula:
        if isinstance(g, (modal.Bottom, modal.Top, modal.Prop)):
            return g
        if isinstance(g, modal.Not):
            return neg(g.body)
        if isinstance(g, modal.And):
            return modal.And(pos(g.lhs), pos(g.rhs))
        if isinstance(g, modal.Or):
            return modal.Or(pos(g.lhs), pos(g.rhs))
        if isinstance(g, modal.Implies):
            return modal.Or(neg(g.lhs), pos(g.rhs))
        if isinstance(g, modal.Iff):
            return modal.Or(
                modal.And(pos(g.lhs), pos(g.rhs)), modal.And(neg(g.lhs), neg(g.rhs))
            )
        if isinstance(g, modal.Box):
            return modal.Box(pos(g.body))
        if isinstance(g, modal.Dia):
            return modal.Dia(pos(g.body))
        raise TypeError(f"not a modal formula: {g!r}")

    def neg(g: modal.Formula) -> modal.Formula:
        if isinstance(g, modal.Bottom):
            return modal.TOP
        if isinstance(g, modal.Top):
            return modal.BOTTOM
        if isinstance(g, modal.Prop):
            return modal.Not(g)
        if isinstance(g, modal.Not):
            return pos(g.body)
        if isinstance(g, modal.And):
            return modal.Or(neg(g.lhs), neg(g.rhs))
        if isinstance(g, modal.Or):
            return modal.And(neg(g.lhs), neg(g.rhs))
        if isinstance(g, modal.Implies):
            return modal.And(pos(g.lhs), neg(g.rhs))
        if isinstance(g, modal.Iff):
            return modal.Or(
                modal.And(pos(g.lhs), neg(g.rhs)), modal.And(neg(g.lhs), pos(g.rhs))
            )
        if isinstance(g, modal.Box):
            return modal.Dia(neg(g.body))
        if isinstance(g, modal.Dia):
            return modal.Box(neg(g.body))
        raise TypeError(f"not a modal formula: {g!r}")

    return pos(f)


def fold_constants(f: modal.Formula) -> modal.Formula:
    """Propagate true/false through connectives; extension-preserving."""
    if isinstance(f, (modal.Bottom, modal.Top, modal.Prop)):
        return f
    if isinstance(f, modal.Not):
        body = fold_constants(f.body)
        if isinstance(body, modal.Bottom):
            return modal.TOP
        if isinstance(body, modal.Top):
            return modal.BOTTOM
        return modal.Not(body)
    if isinstance(f, modal.And):
        lhs, rhs = fold_constants(f.lhs), fold_constants(f.rhs)
        if isinstance(lhs, modal.Bottom) or isinstance(rhs, modal.Bottom):
            return modal.BOTTOM
        if isinstance(lhs, modal.Top):
            return rhs
        if isinstance(rhs, modal.Top):
            return lhs
        return modal.And(lhs, rhs)
    if isinstance(f, modal.Or):
        lhs, rhs = fold_constants(f.lhs), fold_constants(f.rhs)
        if isinstance(lhs, modal.Top) or isinstance(rhs, modal.Top):
            return modal.TOP
        if isinstance(lhs, modal.Bottom):
            return rhs
        if isinstance(rhs, modal.Bottom):
            return lhs
        return modal.Or(lhs, rhs)
    if isinstance(f, modal.Implies):
        lhs, rhs = fold_constants(f.lhs), fold_constants(f.rhs)
        if isinstance(lhs, modal.Bottom) or isinstance(rhs, modal.Top):
            return modal.TOP
        if isinstance(lhs, modal.Top):
            return rhs
        return modal.Implies(lhs, rhs)
    if isinstance(f, modal.Iff):
        lhs, rhs = fold_constants(f.lhs), fold_constants(f.rhs)
        if isinstance(lhs, modal.Top):
            return rhs
        if isinstance(rhs, modal.Top):
            return lhs
        return modal.Iff(lhs, rhs)
    if isinstance(f, modal.Dia):
        body = fold_constants(f.body)
        if isinstance(body, modal.Bottom):
            return modal.BOTTOM
        return modal.Dia(body)
    if isinstance(f, modal.Box):
        body = fold_constants(f.body)
        if isinstance(body, modal.Top):
            return modal.TOP
        return modal.Box(body)
    raise TypeError(f"not a modal formula: {f!r}")


def negate_to_antecedent(f: modal.Formula) -> modal.Formula:
    """For a formula built from implications with [], & and |, import the
    negation over the composition so that f is equivalent to
    ``result -> false``.

    At implication leaves ``a -> c`` the negation lands as ``a & ~c``
    with the consequent pushed to negation normal form, which keeps the
    antecedents' box-formulas intact.  Raises NotInClass when some leaf
    is not an implication.
    """

    def go(g: modal.Formula) -> modal.Formula:
        if isinstance(g, modal.Box):
            return modal.Dia(go(g.body))
        if isinstance(g, modal.And):
            return modal.Or(go(g.lhs), go(g.rhs))
        if isinstance(g, modal.Or):
            return modal.And(go(g.lhs), go(g.rhs))
        if isinstance(g, modal.Implies):
            return modal.And(g.lhs, nnf(modal.Not(g.rhs)))
        raise NotInClass(
            f"{modal.print_modal(g)!r} is not an implication composed with [], & and |"
        )

    return fold_constants(go(f))


def to_definite_implications(
    imp: modal.Formula, max_conjuncts: int = DEFAULT_CONJUNCT_CAP
) -> list[modal.Formula]:
    """Split an implication into definite implications whose conjunction
    is equivalent: distribute <> and & over | in the antecedent, then
    apply (a | b) -> c == (a -> c) & (b -> c).

    Disjunctions inside negative formulas survive: maximal negative
    subformulas are frozen before distribution.  Duplicate conjuncts are
    dropped; more than max_conjuncts raises ConjunctCapExceeded.
    """
    if not isinstance(imp, modal.Implies):
        raise NotInClass("expected an implication")
    decomp = classify.decompose_antecedent(imp.lhs)

    def disjuncts(node) -> list[modal.Formula]:
        tag = node[0]
        if tag == "slot":
            return [decomp.slots[node[1]].formula]
        if tag == "or":
            out = disjuncts(node[1]) + disjuncts(node[2])
        elif tag == "and":
            left = disjuncts(node[1])
            right = disjuncts(node[2])
            if len(left) * len(right) > max_conjuncts:
                raise ConjunctCapExceeded(
                    f"distribution exceeds {max_conjuncts} conjuncts"
                )
            out = [modal.And(a, b) for a in left for b in right]
        else:  # dia
            out = [modal.Dia(a) for a in disjuncts(node[1])]
        if len(out) > max_conjuncts:
            raise ConjunctCapExceeded(f"distribution exceeds {max_conjuncts} conjuncts")
        return out

    seen: dict[modal.Formula, None] = {}
    for ant in disjuncts(decomp.skeleton):
        seen.setdefault(modal.Implies(ant, imp.rhs))
    return list(seen)


def eliminate_uniform_variables(
    f: modal.Formula,
) -> tuple[modal.Formula, dict[str, modal.Formula]]:
    """Replace every positively-uniform letter with false and every
    negatively-uniform letter with true.

    Frame validity is preserved at every world (truth under a fixed
    valuation is not).  Returns the rewritten formula and the
    substitution applied."""
    pol = classify.polarity_map(f)
    subst: dict[str, modal.Formula] = {}
    for letter, p in pol.items():
        if p is classify.Polarity.POSITIVE:
            subst[letter] = modal.BOTTOM
        elif p is classify.Polarity.NEGATIVE:
            subst[letter] = modal.TOP
    if not subst:
        return f, {}
    return modal.substitute_prop(f, subst), subst
