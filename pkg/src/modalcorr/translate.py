"""The standard translation into the first-order correspondence language.

Each modal operator consumes a fresh ``y``-series variable; bound
variables are never reused across branches, so the output satisfies the
convention that all bound variables are distinct and the designated
source variable is the only free one.
"""

from __future__ import annotations

from . import fol, modal


def standard_translation(
    f: modal.Formula, x: str = "x", gen: fol.VarGen | None = None
) -> fol.FO:
    """ST_x(f): first-order truth of f at the world denoted by x."""
    gen = gen or fol.VarGen()

    def go(g: modal.Formula, t: str) -> fol.FO:
        if isinstance(g, modal.Bottom):
            return fol.Not(fol.Eq(t, t))
        if isinstance(g, modal.Top):
            return fol.Eq(t, t)
        if isinstance(g, modal.Prop):
            return fol.Pred(fol.pred_sym(g.name), t)
        if isinstance(g, modal.Not):
            return fol.Not(go(g.body, t))
        if isinstance(g, modal.And):
            return fol.And((go(g.lhs, t), go(g.rhs, t)))
        if isinstance(g, modal.Or):
            return fol.Or((go(g.lhs, t), go(g.rhs, t)))
        if isinstance(g, modal.Implies):
            return fol.Implies(go(g.lhs, t), go(g.rhs, t))
        if isinstance(g, modal.Iff):
            # no first-class bi-implication in the target language; the
            # two directions get independent fresh variables
            return fol.And(
                (
                    fol.Implies(go(g.lhs, t), go(g.rhs, t)),
                    fol.Implies(go(g.rhs, t), go(g.lhs, t)),
                )
            )
        if isinstance(g, modal.Dia):
            y = gen.fresh("y")
            return fol.Exists(y, fol.And((fol.Rel(t, y), go(g.body, y))))
        if isinstance(g, modal.Box):
            y = gen.fresh("y")
            return fol.Forall(y, fol.Implies(fol.Rel(t, y), go(g.body, y)))
        raise TypeError(f"not a modal formula: {g!r}")

    return go(f, x)


def second_order_translation(f: modal.Formula, x: str = "x") -> fol.SO:
    """Universal predicate quantification over the standard translation;
    the prefix lists predicates in first-occurrence order of their
    proposition letters."""
    prefix = tuple(fol.pred_sym(p) for p in modal.prop_letters(f))
    return fol.SO(prefix, standard_translation(f, x))
