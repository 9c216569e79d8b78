"""Order-theoretic verification on finite powerset algebras.

Checks the properties that make the reduction strategies sound:
bounded additivity of antecedent skeletons, complete operators,
adjoint pairs and their extracted relations, residuated maps, and the
per-implication condition checklist the strategies rely on.  Every
candidate computed pointwise (adjoints, residuals, relations) is then
verified exhaustively against its defining law; nothing is trusted
from construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Optional

from . import classify, modal, semantics
from .errors import NotMeetPreserving, NotResiduated, ResourceCap

_ADDITIVE_MAX_N = 5
_ADJOINT_MAX_N = 5
_MEET_MAX_N = 4
_RESIDUAL_MAX_N = 4
_VALIDATE_MAX_N = 3


@dataclass
class SetFunction:
    """An operation P(W)^arity -> P(W) on one frame's powerset algebra,
    with world sets as bitmasks.  Results are memoized."""

    frame: semantics.Frame
    arity: int
    fn: Callable[..., int]
    label: str = ""

    def __post_init__(self):
        self._memo: dict[tuple[int, ...], int] = {}

    def __call__(self, *xs: int) -> int:
        if len(xs) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(xs)}")
        if xs not in self._memo:
            self._memo[xs] = self.fn(*xs)
        return self._memo[xs]

    @classmethod
    def from_formula(
        cls,
        frame: semantics.Frame,
        f: modal.Formula,
        args: tuple[str, ...],
        params: dict[str, int] | None = None,
    ) -> "SetFunction":
        """The meaning function of f with the given letters as
        coordinates; remaining letters read from the fixed params."""
        fixed = dict(params or {})

        def fn(*xs: int) -> int:
            val = dict(fixed)
            val.update(zip(args, xs))
            return semantics.extension(f, frame, val)

        return cls(frame, len(args), fn, label=modal.print_modal(f))


@dataclass(frozen=True)
class FunctionCounterexample:
    inputs: tuple
    detail: str

    def __str__(self) -> str:
        return f"{self.detail} at {self.inputs}"


def _subsets(n: int):
    return range(1 << n)


def _bounded_submasks(x: int, m: int) -> list[int]:
    out = [s for s in range(x + 1) if (s & x) == s and bin(s).count("1") <= m]
    return out


def _union(values) -> int:
    acc = 0
    for v in values:
        acc |= v
    return acc


def is_m_additive(
    f: SetFunction, mbar: list[int] | tuple[int, ...]
) -> Optional[FunctionCounterexample]:
    """f(X) must equal the union of f over coordinatewise subsets of
    size at most m_i (empty when some coordinate is empty).  Returns the
    least failing input tuple, scanning bitmasks lexicographically."""
    n = f.frame.size
    if n > _ADDITIVE_MAX_N:
        raise ResourceCap(f"additivity sweep capped at {_ADDITIVE_MAX_N} worlds")
    if len(mbar) != f.arity:
        raise ValueError("one bound per coordinate required")
    for xs in product(_subsets(n), repeat=f.arity):
        if any(x == 0 for x in xs):
            expected = 0
        else:
            choices = [_bounded_submasks(x, m) for x, m in zip(xs, mbar)]
            expected = _union(f(*zs) for zs in product(*choices))
        if f(*xs) != expected:
            return FunctionCounterexample(xs, "not additive within the bounds")
    return None


def is_complete_operator(f: SetFunction) -> Optional[FunctionCounterexample]:
    """1-additivity plus preservation of unions of sampled families in
    each coordinate (empty family, singletons, pairs, the full powerset)."""
    bad = is_m_additive(f, [1] * f.arity)
    if bad is not None:
        return bad
    n = f.frame.size
    subsets = list(_subsets(n))
    families = [()] + [(y,) for y in subsets] + [
        (y1, y2) for y1 in subsets for y2 in subsets if y1 < y2
    ] + [tuple(subsets)]
    for i in range(f.arity):
        for others in product(subsets, repeat=f.arity - 1):
            for fam in families:
                joined = _union(fam)
                args = others[:i] + (joined,) + others[i:]
                want = _union(f(*(others[:i] + (y,) + others[i:])) for y in fam)
                if f(*args) != want:
                    return FunctionCounterexample(
                        (i, fam, others), "union not preserved in coordinate"
                    )
    return None


def right_adjoint_of(f: SetFunction) -> Optional[SetFunction]:
    """The pointwise candidate g(Y) = union of {X : f(X) subseteq Y},
    returned only if the adjunction law f(X) <= Y iff X <= g(Y) verifies
    exhaustively."""
    n = f.frame.size
    if n > _ADJOINT_MAX_N:
        raise ResourceCap(f"adjoint sweep capped at {_ADJOINT_MAX_N} worlds")
    if f.arity != 1:
        raise ValueError("right adjoints are computed for unary maps")
    table = [0] * (1 << n)
    for y in _subsets(n):
        table[y] = _union(x for x in _subsets(n) if f(x) & ~y == 0)
    for x in _subsets(n):
        for y in _subsets(n):
            if (f(x) & ~y == 0) != (x & ~table[y] == 0):
                return None
    return SetFunction(f.frame, 1, lambda y: table[y], label=f"right adjoint of {f.label}")


def left_adjoint_of(g: SetFunction) -> Optional[SetFunction]:
    """Dual of right_adjoint_of: candidate f(X) = intersection of
    {Y : X subseteq g(Y)}, verified against the adjunction law."""
    n = g.frame.size
    if n > _ADJOINT_MAX_N:
        raise ResourceCap(f"adjoint sweep capped at {_ADJOINT_MAX_N} worlds")
    if g.arity != 1:
        raise ValueError("left adjoints are computed for unary maps")
    full = (1 << n) - 1
    table = [0] * (1 << n)
    for x in _subsets(n):
        acc = full
        for y in _subsets(n):
            if x & ~g(y) == 0:
                acc &= y
        table[x] = acc
    for x in _subsets(n):
        for y in _subsets(n):
            if (table[x] & ~y == 0) != (x & ~g(y) == 0):
                return None
    return SetFunction(g.frame, 1, lambda x: table[x], label=f"left adjoint of {g.label}")


def is_completely_meet_preserving(g: SetFunction) -> Optional[FunctionCounterexample]:
    """Meet preservation over all families of at most three subsets,
    the empty family (whose meet is W) and the full powerset family.
    The adjunction law check is the authoritative one; this sampling
    pins the property down on finite carriers."""
    n = g.frame.size
    if n > _MEET_MAX_N:
        raise ResourceCap(f"meet-preservation sweep capped at {_MEET_MAX_N} worlds")
    if g.arity != 1:
        raise ValueError("meet preservation is checked for unary maps")
    full = (1 << n) - 1
    subsets = list(_subsets(n))
    families = [()] + [(a,) for a in subsets]
    families += [(a, b) for a in subsets for b in subsets if a < b]
    families += [
        (a, b, c)
        for a in subsets
        for b in subsets
        for c in subsets
        if a < b < c
    ]
    families.append(tuple(subsets))
    for fam in families:
        meet = full
        for y in fam:
            meet &= y
        want = full
        for y in fam:
            want &= g(y)
        if g(meet) != want:
            return FunctionCounterexample((fam,), "meets not preserved")
    return None


def extract_relation(g: SetFunction) -> frozenset[tuple[int, int]]:
    """The relation S with g = l_S, read off pointwise: S(x,z) iff
    x is not in g(W minus {z}); verified exhaustively."""
    bad = is_completely_meet_preserving(g)
    if bad is not None:
        raise NotMeetPreserving(str(bad))
    n = g.frame.size
    full = (1 << n) - 1
    pairs = set()
    for z in range(n):
        img = g(full & ~(1 << z))
        for x in range(n):
            if not img & (1 << x):
                pairs.add((x, z))
    succ = [0] * n
    for x, z in pairs:
        succ[x] |= 1 << z
    for y in _subsets(n):
        want = _union(
            (1 << x) for x in range(n) if succ[x] & ~y == 0
        )
        if g(y) != want:
            raise NotMeetPreserving(
                "sampled meet checks passed but the extracted relation disagrees"
            )
    return frozenset(pairs)


def residual_in_last(f: SetFunction) -> Optional[SetFunction]:
    """Candidate residual in the last coordinate, computed by the
    pointwise union formula and verified against the residuation law
    for every prefix of parameters."""
    n = f.frame.size
    if n > _RESIDUAL_MAX_N:
        raise ResourceCap(f"residuation sweep capped at {_RESIDUAL_MAX_N} worlds")
    table: dict[tuple[int, ...], int] = {}
    for prefix in product(_subsets(n), repeat=f.arity - 1):
        for y in _subsets(n):
            table[prefix + (y,)] = _union(
                x for x in _subsets(n) if f(*prefix, x) & ~y == 0
            )
        for x in _subsets(n):
            for y in _subsets(n):
                if (f(*prefix, x) & ~y == 0) != (x & ~table[prefix + (y,)] == 0):
                    return None
    return SetFunction(
        f.frame, f.arity, lambda *args: table[args], label=f"residual of {f.label}"
    )


def _residual_in_coordinate(f: SetFunction, h: int) -> Optional[SetFunction]:
    if h == f.arity - 1:
        return residual_in_last(f)
    order = [i for i in range(f.arity) if i != h] + [h]

    def permuted(*xs: int) -> int:
        args = [0] * f.arity
        for slot, coord in enumerate(order):
            args[coord] = xs[slot]
        return f(*args)

    swapped = SetFunction(f.frame, f.arity, permuted, label=f.label)
    return residual_in_last(swapped)


@dataclass(frozen=True)
class DirectImageRelation:
    """An (arity)-ary relation used through its direct-image operation
    S[X_1, ..., X_{arity-1}]."""

    arity: int
    tuples: frozenset[tuple[int, ...]]

    def image(self, *xs: int) -> int:
        if len(xs) != self.arity - 1:
            raise ValueError(f"expected {self.arity - 1} arguments")
        out = 0
        for t in self.tuples:
            if all(xs[i] & (1 << t[i]) for i in range(len(xs))):
                out |= 1 << t[-1]
        return out


def relation_from_residuated(f: SetFunction) -> DirectImageRelation:
    """The relation S with f(X) = S[X], read off from singletons:
    (x_1, ..., x_j, y) in S iff y in f({x_1}, ..., {x_j}); requires f
    residuated in every coordinate and verifies the identity
    exhaustively."""
    n = f.frame.size
    if n > _RESIDUAL_MAX_N:
        raise ResourceCap(f"residuation sweep capped at {_RESIDUAL_MAX_N} worlds")
    for h in range(f.arity):
        if _residual_in_coordinate(f, h) is None:
            raise NotResiduated(f"no residual in coordinate {h}")
    tuples = set()
    for points in product(range(n), repeat=f.arity):
        img = f(*(1 << p for p in points))
        for y in range(n):
            if img & (1 << y):
                tuples.add(points + (y,))
    rel = DirectImageRelation(f.arity + 1, frozenset(tuples))
    for xs in product(_subsets(n), repeat=f.arity):
        if f(*xs) != rel.image(*xs):
            raise NotResiduated("direct image disagrees with the map")
    return rel


# ---------------------------------------------------------------------------
# Strategy-precondition checklist


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "Pass" if self.passed else "Fail"
        return f"{self.name}: {status}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class ConditionChecklist:
    frame: semantics.Frame
    items: list[ConditionCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.items)


def _positional_box_formula(abf: classify.AtomicBoxFormula) -> tuple[modal.Formula, tuple[str, ...]]:
    """Rebuild the box-formula with one fresh letter per position, so
    repeated letters become independent coordinates."""
    names = tuple(f"u{i}" for i in range(len(abf.rho))) + ("hd",)
    g: modal.Formula = modal.Prop("hd")
    for _ in range(abf.boxes):
        g = modal.Box(g)
    for name in reversed(names[:-1]):
        g = modal.Box(modal.Implies(modal.Prop(name), g))
    return g, names


def _expected_chain_map(frame: semantics.Frame, h: int, k: int) -> Callable[..., int]:
    """The path-form left adjoint: R^k[U_h & R[U_{h-1} & ... R[U_1 & R[X]]]]."""

    def fn(*args: int) -> int:
        us, x = args[:-1], args[-1]
        acc = x
        for u in us:
            acc = semantics.relation_image(frame, acc, 1) & u
        return semantics.relation_image(frame, acc, k)

    return fn


def _skeleton_function(
    frame: semantics.Frame,
    decomp: classify.AntecedentDecomposition,
    slot_args: dict[int, int],
    gamma_vals: dict[int, int],
) -> Callable[..., int]:
    """Evaluate the antecedent skeleton with chi slots as coordinates
    (slot index -> argument position) and gammas fixed."""

    def fn(*xs: int) -> int:
        def go(node) -> int:
            tag = node[0]
            if tag == "slot":
                idx = node[1]
                if idx in slot_args:
                    return xs[slot_args[idx]]
                return gamma_vals[idx]
            if tag == "dia":
                return semantics.dia_image(frame, go(node[1]))
            if tag == "and":
                return go(node[1]) & go(node[2])
            return go(node[1]) | go(node[2])

        return go(decomp.skeleton)

    return fn


def validate_conditions(
    imp: modal.Formula,
    frame: semantics.Frame,
    report: Optional[classify.ClassificationReport] = None,
) -> ConditionChecklist:
    """Check, on one frame, the order-theoretic conditions behind the
    reduction strategy for an implication: skeleton additivity, box-
    formulas inducing residuated maps of the expected relational path
    form, negative parts antitone, consequent monotone."""
    if frame.size > _VALIDATE_MAX_N:
        raise ResourceCap(f"condition checks capped at {_VALIDATE_MAX_N} worlds")
    report = report or classify.classify(imp)
    items: list[ConditionCheck] = []
    if not isinstance(imp, modal.Implies):
        return ConditionChecklist(
            frame, [ConditionCheck("implication-shape", False, "not an implication")]
        )
    decomp = report.decomposition
    if decomp is None:
        items.append(
            ConditionCheck(
                "antecedent-decomposition",
                False,
                "antecedent is not an atomic regular antecedent",
            )
        )
        # fall back: test the whole antecedent as a single chi candidate
        for letter in modal.prop_letters(imp.lhs):
            cand = SetFunction.from_formula(frame, imp.lhs, (letter,))
            ok = left_adjoint_of(cand) is not None
            items.append(
                ConditionCheck(
                    f"chi-candidate {modal.print_modal(imp.lhs)} adjoint in {letter}",
                    ok,
                    "" if ok else "no left adjoint",
                )
            )
        return ConditionChecklist(frame, items)

    items.append(ConditionCheck("antecedent-decomposition", True))
    chis = decomp.chis
    gammas = decomp.gammas

    # (b) skeleton additivity: per letter with the occurrence counts for
    # bare-letter antecedents, per chi occurrence with all-ones bounds
    slot_index = {
        idx: s for idx, s in enumerate(decomp.slots) if s.kind == "chi"
    }
    vssi_like = all(s.abf.rho == () and s.abf.boxes == 0 for s in chis)
    gamma_slots = [i for i, s in enumerate(decomp.slots) if s.kind == "gamma"]
    n = frame.size
    param_tuples = list(product(_subsets(n), repeat=len(gamma_slots)))
    if len(param_tuples) > 4096:
        raise ResourceCap("too many negative-part parameter combinations")
    if vssi_like and chis:
        letters = []
        for s in chis:
            if s.abf.head not in letters:
                letters.append(s.abf.head)
        mbar = [sum(1 for s in chis if s.abf.head == p) for p in letters]
        slot_args = {
            idx: letters.index(s.abf.head) for idx, s in slot_index.items()
        }
        ok = True
        detail = ""
        for params in param_tuples:
            gvals = dict(zip(gamma_slots, params))
            fn = SetFunction(
                frame,
                len(letters),
                _skeleton_function(frame, decomp, slot_args, gvals),
            )
            bad = is_m_additive(fn, mbar)
            if bad is not None:
                ok = False
                detail = f"bounds {mbar}: {bad}"
                break
        items.append(
            ConditionCheck(f"skeleton {tuple(mbar)}-additive", ok, detail)
        )
    elif chis:
        slot_args = {idx: pos for pos, idx in enumerate(slot_index)}
        ok = True
        detail = ""
        for params in param_tuples:
            gvals = dict(zip(gamma_slots, params))
            fn = SetFunction(
                frame,
                len(slot_index),
                _skeleton_function(frame, decomp, slot_args, gvals),
            )
            bad = is_m_additive(fn, [1] * len(slot_index))
            if bad is not None:
                ok = False
                detail = str(bad)
                break
        items.append(ConditionCheck("skeleton 1-additive", ok, detail))

    # (c)/(d): each box-formula induces a residuated map of path form
    for s in chis:
        abf = s.abf
        positional, names = _positional_box_formula(abf)
        chi_fn = SetFunction.from_formula(frame, positional, names)
        h = len(abf.rho)
        expected = _expected_chain_map(frame, h, abf.boxes)
        ok = True
        detail = ""
        if h == 0:
            g = SetFunction(frame, 1, lambda y: chi_fn(y), label=chi_fn.label)
            adj = left_adjoint_of(g)
            if adj is None:
                ok = False
                detail = "no left adjoint"
            else:
                for x in _subsets(n):
                    if adj(x) != expected(x):
                        ok = False
                        detail = "adjoint is not the k-step image"
                        break
        else:
            for us in product(_subsets(n), repeat=h):
                slice_fn = SetFunction(frame, 1, lambda y, us=us: chi_fn(*us, y))
                adj = left_adjoint_of(slice_fn)
                if adj is None:
                    ok = False
                    detail = f"no residual at parameters {us}"
                    break
                mismatch = next(
                    (x for x in _subsets(n) if adj(x) != expected(*us, x)), None
                )
                if mismatch is not None:
                    ok = False
                    detail = f"residual differs from the chain form at {us}"
                    break
        items.append(
            ConditionCheck(
                f"chi {modal.print_modal(s.formula)} residuated with R-number {abf.boxes}",
                ok,
                detail,
            )
        )

    # (e) negative parts antitone in each coordinate
    for s in gammas:
        letters = modal.prop_letters(s.formula)
        fn = SetFunction.from_formula(frame, s.formula, letters)
        ok = _is_monotone(fn, increasing=False)
        items.append(
            ConditionCheck(
                f"gamma {modal.print_modal(s.formula)} order-reversing", ok
            )
        )

    # consequent monotone in each coordinate
    letters = modal.prop_letters(imp.rhs)
    fn = SetFunction.from_formula(frame, imp.rhs, letters)
    ok = _is_monotone(fn, increasing=True)
    items.append(
        ConditionCheck(
            f"consequent {modal.print_modal(imp.rhs)} order-preserving", ok
        )
    )
    return ConditionChecklist(frame, items)


def _is_monotone(f: SetFunction, increasing: bool) -> bool:
    n = f.frame.size
    for xs in product(_subsets(n), repeat=f.arity):
        base = f(*xs)
        for i in range(f.arity):
            x = xs[i]
            bigger = [s for s in _subsets(n) if s & x == x]
            for s in bigger:
                ys = xs[:i] + (s,) + xs[i + 1 :]
                other = f(*ys)
                if increasing and base & ~other:
                    return False
                if not increasing and other & ~base:
                    return False
    return True
