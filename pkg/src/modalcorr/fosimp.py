"""Equivalence-preserving first-order simplification.

The rule set, applied innermost-first to a fixed point, in this order
at each node: constant folding (t = t, negated constants), flattening
and unit/absorbing laws for the n-ary connectives, duplicate removal,
double negation, implication units, vacuous-quantifier removal, and the
one-point rules ``exists y (y = t & ...)`` / ``all y (y = t -> ...)``.
Every rule preserves truth on all structures (frames are nonempty, so
dropping a vacuous quantifier is sound), and every rule strictly
shrinks the term, so rewriting terminates and is idempotent.
"""

from __future__ import annotations

from typing import Optional

from . import fol
from .errors import ResourceCap, UnboundVariable

#: largest frame size equivalent_on_small_frames will sweep exhaustively
DEFAULT_EQUIV_LIMIT = 4


def simplify(f: fol.FO) -> fol.FO:
    if isinstance(f, (fol.TrueLit, fol.FalseLit, fol.Rel, fol.Pred)):
        return f
    if isinstance(f, fol.Eq):
        return fol.TRUE if f.lhs == f.rhs else f
    if isinstance(f, fol.Not):
        body = simplify(f.body)
        if isinstance(body, fol.TrueLit):
            return fol.FALSE
        if isinstance(body, fol.FalseLit):
            return fol.TRUE
        if isinstance(body, fol.Not):
            return body.body
        return fol.Not(body)
    if isinstance(f, (fol.And, fol.Or)):
        is_and = isinstance(f, fol.And)
        unit, absorbing = (fol.TrueLit, fol.FalseLit) if is_and else (fol.FalseLit, fol.TrueLit)
        parts: list[fol.FO] = []
        for g in f.parts:
            h = simplify(g)
            if isinstance(h, type(f)):
                parts.extend(h.parts)  # children are already simplified
            elif isinstance(h, absorbing):
                return absorbing()
            elif not isinstance(h, unit):
                parts.append(h)
        deduped: dict[fol.FO, None] = {}
        for h in parts:
            deduped.setdefault(h)
        return fol.conj(deduped) if is_and else fol.disj(deduped)
    if isinstance(f, fol.Implies):
        lhs = simplify(f.lhs)
        rhs = simplify(f.rhs)
        if isinstance(lhs, fol.TrueLit):
            return rhs
        if isinstance(lhs, fol.FalseLit) or isinstance(rhs, fol.TrueLit):
            return fol.TRUE
        if isinstance(rhs, fol.FalseLit):
            return simplify(fol.Not(lhs))
        return fol.Implies(lhs, rhs)
    if isinstance(f, (fol.Forall, fol.Exists)):
        body = simplify(f.body)
        if f.var not in fol.free_vars(body):
            return body  # frames are nonempty
        pointed = _one_point(type(f) is fol.Exists, f.var, body)
        if pointed is not None:
            return simplify(pointed)
        return type(f)(f.var, body)
    raise TypeError(f"not a first-order formula: {f!r}")


def _pick_equation(var: str, parts: tuple[fol.FO, ...]) -> Optional[tuple[int, str]]:
    """First conjunct of the shape var = t or t = var with t a different
    variable; returns its index and t."""
    for i, g in enumerate(parts):
        if isinstance(g, fol.Eq):
            if g.lhs == var and g.rhs != var:
                return i, g.rhs
            if g.rhs == var and g.lhs != var:
                return i, g.lhs
    return None


def _one_point(existential: bool, var: str, body: fol.FO) -> Optional[fol.FO]:
    """exists y (y = t & phi) -> phi[t/y]; all y (y = t -> phi) -> phi[t/y].

    The rule does not fire when phi rebinds t, which would capture it."""
    if existential:
        if isinstance(body, fol.Eq):
            hit = _pick_equation(var, (body,))
            if hit is not None:
                return fol.TRUE
        if isinstance(body, fol.And):
            hit = _pick_equation(var, body.parts)
            if hit is not None:
                i, t = hit
                rest = fol.conj(body.parts[:i] + body.parts[i + 1 :])
                if t not in fol.bound_vars(rest):
                    return fol.subst_var(rest, {var: t})
    else:
        if isinstance(body, fol.Implies):
            ant = body.lhs
            if isinstance(ant, fol.Eq):
                hit = _pick_equation(var, (ant,))
                if hit is not None and hit[1] not in fol.bound_vars(body.rhs):
                    return fol.subst_var(body.rhs, {var: hit[1]})
            if isinstance(ant, fol.And):
                hit = _pick_equation(var, ant.parts)
                if hit is not None:
                    i, t = hit
                    rest = ant.parts[:i] + ant.parts[i + 1 :]
                    target = (
                        fol.Implies(fol.conj(rest), body.rhs) if rest else body.rhs
                    )
                    if t not in fol.bound_vars(target):
                        return fol.subst_var(target, {var: t})
    return None


def equivalent_on_small_frames(
    a: fol.FO,
    b: fol.FO,
    max_n: int,
    limit: int = DEFAULT_EQUIV_LIMIT,
):
    """Exhaustive semantic equivalence check over all frames with at
    most max_n worlds and all assignments of the one allowed free
    variable x.  Returns None, or the first (frame, assignment) where
    the two formulas disagree."""
    if max_n > limit:
        raise ResourceCap(f"equivalence sweep capped at frame size {limit}")
    stray = (fol.free_vars(a) | fol.free_vars(b)) - {"x"}
    if stray:
        raise UnboundVariable(f"free variables besides x: {sorted(stray)}")
    from . import fastcheck

    return fastcheck.fo_equivalent(a, b, max_n, enum_cap=limit)
