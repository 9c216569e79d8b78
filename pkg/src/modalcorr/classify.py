"""Polarity analysis, antecedent decomposition, dependency digraphs, and
assignment of syntactic classes.

The hierarchy, from most to least specific: closed formulas, uniform
formulas, very simple Sahlqvist implications (antecedents built from
constants, negative formulas and bare letters with & and <>), Sahlqvist
implications (boxed atoms allowed), atomic inductive implications
(box-formulas ``[](p0 -> [](p1 -> ... []^k q))`` with an acyclic
dependency digraph), atomic regular implications (cyclic digraph),
then Sahlqvist / atomic inductive formulas (implications composed with
[], &, |).  Anything else is reported unclassified, which is a refusal
and never a claim that no first-order correspondent exists: that
question is algorithmically undecidable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from . import modal
from .errors import NotRegularAntecedent


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"


class SyntacticClass(enum.Enum):
    CLOSED = "closed"
    UNIFORM = "uniform"
    VSSI = "very-simple-sahlqvist-implication"
    SI = "sahlqvist-implication"
    AII = "atomic-inductive-implication"
    ATOMIC_REGULAR_IMP = "atomic-regular-implication"
    SF = "sahlqvist-formula"
    AIF = "atomic-inductive-formula"
    UNCLASSIFIED = "unclassified"


#: classes the correspondence pipeline knows how to reduce
SUPPORTED_CLASSES = frozenset(
    {
        SyntacticClass.CLOSED,
        SyntacticClass.UNIFORM,
        SyntacticClass.VSSI,
        SyntacticClass.SI,
        SyntacticClass.AII,
        SyntacticClass.SF,
        SyntacticClass.AIF,
    }
)


def polarity_map(f: modal.Formula) -> dict[str, Polarity]:
    """Polarity of each occurring letter: parity of enclosing negations,
    counting the implicit negations of -> and <->."""
    signs: dict[str, set[int]] = {}

    def walk(g: modal.Formula, sign: int) -> None:
        if isinstance(g, modal.Prop):
            signs.setdefault(g.name, set()).add(sign)
        elif isinstance(g, modal.Not):
            walk(g.body, -sign)
        elif isinstance(g, (modal.And, modal.Or)):
            walk(g.lhs, sign)
            walk(g.rhs, sign)
        elif isinstance(g, modal.Implies):
            walk(g.lhs, -sign)
            walk(g.rhs, sign)
        elif isinstance(g, modal.Iff):
            # expands to two implications: everything under it is two-sided
            for s in (sign, -sign):
                walk(g.lhs, s)
                walk(g.rhs, s)
        elif isinstance(g, (modal.Box, modal.Dia)):
            walk(g.body, sign)

    walk(f, 1)
    out = {}
    for name, ss in signs.items():
        if ss == {1}:
            out[name] = Polarity.POSITIVE
        elif ss == {-1}:
            out[name] = Polarity.NEGATIVE
        else:
            out[name] = Polarity.BOTH
    return out


def is_positive_formula(f: modal.Formula) -> bool:
    """Every occurring letter occurs only positively (or not at all)."""
    return all(p is Polarity.POSITIVE for p in polarity_map(f).values())


def is_negative_formula(f: modal.Formula) -> bool:
    """Every occurring letter occurs only negatively (or not at all)."""
    return all(p is Polarity.NEGATIVE for p in polarity_map(f).values())


# ---------------------------------------------------------------------------
# Box-formulas and antecedent decomposition


@dataclass(frozen=True)
class AtomicBoxFormula:
    """[](rho1 -> [](rho2 -> ... []^boxes head)); a bare letter has empty
    rho and zero boxes, a boxed atom has empty rho."""

    rho: tuple[str, ...]
    boxes: int
    head: str

    @property
    def is_boxed_atom(self) -> bool:
        return not self.rho

    def formula(self) -> modal.Formula:
        g: modal.Formula = modal.Prop(self.head)
        for _ in range(self.boxes):
            g = modal.Box(g)
        for letter in reversed(self.rho):
            g = modal.Box(modal.Implies(modal.Prop(letter), g))
        return g


def decompose_atomic_box_formula(f: modal.Formula) -> Optional[AtomicBoxFormula]:
    """Match the atomic box-formula shape exactly; None if no match."""
    if isinstance(f, modal.Prop):
        return AtomicBoxFormula((), 0, f.name)
    if isinstance(f, modal.Box):
        inner = f.body
        sub = decompose_atomic_box_formula(inner)
        if sub is not None and sub.is_boxed_atom:
            return AtomicBoxFormula((), sub.boxes + 1, sub.head)
        if isinstance(inner, modal.Implies) and isinstance(inner.lhs, modal.Prop):
            rest = decompose_atomic_box_formula(inner.rhs)
            if rest is not None:
                return AtomicBoxFormula((inner.lhs.name,) + rest.rho, rest.boxes, rest.head)
    return None


@dataclass(frozen=True)
class Slot:
    """One leaf of the antecedent skeleton: a box-formula occurrence
    (kind 'chi') or a maximal negative subformula (kind 'gamma')."""

    kind: str
    formula: modal.Formula
    abf: Optional[AtomicBoxFormula] = None


# skeleton nodes: ("slot", i) | ("and", l, r) | ("or", l, r) | ("dia", c)
Skeleton = tuple


@dataclass(frozen=True)
class AntecedentDecomposition:
    skeleton: Skeleton
    slots: tuple[Slot, ...]

    @property
    def chis(self) -> tuple[Slot, ...]:
        return tuple(s for s in self.slots if s.kind == "chi")

    @property
    def gammas(self) -> tuple[Slot, ...]:
        return tuple(s for s in self.slots if s.kind == "gamma")

    @property
    def definite(self) -> bool:
        def no_or(node: Skeleton) -> bool:
            tag = node[0]
            if tag == "slot":
                return True
            if tag == "or":
                return False
            if tag == "dia":
                return no_or(node[1])
            return no_or(node[1]) and no_or(node[2])

        return no_or(self.skeleton)

    def reassemble(self) -> modal.Formula:
        def build(node: Skeleton) -> modal.Formula:
            tag = node[0]
            if tag == "slot":
                return self.slots[node[1]].formula
            if tag == "dia":
                return modal.Dia(build(node[1]))
            if tag == "and":
                return modal.And(build(node[1]), build(node[2]))
            return modal.Or(build(node[1]), build(node[2]))

        return build(self.skeleton)


def decompose_antecedent(phi: modal.Formula) -> AntecedentDecomposition:
    """Split an antecedent into its &/|/<> skeleton over box-formula and
    negative-formula slots.

    Maximal negative subformulas are frozen whole (constants count as
    degenerate negative formulas), so disjunctions inside them survive
    later rewriting.  Raises NotRegularAntecedent when some leaf is
    neither negative nor an atomic box-formula.
    """
    slots: list[Slot] = []

    def dec(g: modal.Formula) -> Skeleton:
        if is_negative_formula(g):
            slots.append(Slot("gamma", g))
            return ("slot", len(slots) - 1)
        abf = decompose_atomic_box_formula(g)
        if abf is not None:
            slots.append(Slot("chi", g, abf))
            return ("slot", len(slots) - 1)
        if isinstance(g, modal.And):
            left = dec(g.lhs)
            return ("and", left, dec(g.rhs))
        if isinstance(g, modal.Or):
            left = dec(g.lhs)
            return ("or", left, dec(g.rhs))
        if isinstance(g, modal.Dia):
            return ("dia", dec(g.body))
        raise NotRegularAntecedent(
            f"subformula {modal.print_modal(g)!r} is neither negative nor an atomic box-formula"
        )

    return AntecedentDecomposition(dec(phi), tuple(slots))


# ---------------------------------------------------------------------------
# Dependency digraph


@dataclass(frozen=True)
class DependencyDigraph:
    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    @classmethod
    def from_chis(cls, chis) -> "DependencyDigraph":
        heads = frozenset(s.abf.head for s in chis)
        edges = frozenset(
            (r, s.abf.head) for s in chis for r in s.abf.rho if r in heads
        )
        return cls(heads, edges)


def dependency_digraph(antecedent: modal.Formula) -> DependencyDigraph:
    """Digraph over the heads of the antecedent's box-formulas: an edge
    a -> b whenever a occurs inessentially in a box-formula with head b."""
    return DependencyDigraph.from_chis(decompose_antecedent(antecedent).chis)


def topological_order(g: DependencyDigraph) -> Optional[list[str]]:
    """A linear extension of the dependency order, ties alphabetical;
    None when the digraph has a cycle (including self-loops)."""
    preds: dict[str, set[str]] = {v: set() for v in g.vertices}
    for a, b in g.edges:
        preds[b].add(a)
    order: list[str] = []
    placed: set[str] = set()
    while len(order) < len(g.vertices):
        ready = sorted(v for v in g.vertices if v not in placed and preds[v] <= placed)
        if not ready:
            return None
        order.append(ready[0])
        placed.add(ready[0])
    return order


# ---------------------------------------------------------------------------
# The classifier


@dataclass(frozen=True)
class ClassificationReport:
    formula: modal.Formula
    syntactic_class: SyntacticClass
    definite: bool
    polarity: dict[str, Polarity] = field(compare=False)
    decomposition: Optional[AntecedentDecomposition] = None
    digraph: Optional[DependencyDigraph] = None
    order: Optional[tuple[str, ...]] = None
    consequent: Optional[modal.Formula] = None

    @property
    def supported(self) -> bool:
        return self.syntactic_class in SUPPORTED_CLASSES


def _implication_parts(f: modal.Formula):
    """Classify an implication against the antecedent shapes; None when
    f is not an implication with positive consequent and atomic regular
    antecedent."""
    if not isinstance(f, modal.Implies):
        return None
    if not is_positive_formula(f.rhs):
        return None
    try:
        decomp = decompose_antecedent(f.lhs)
    except NotRegularAntecedent:
        return None
    chis = decomp.chis
    digraph = DependencyDigraph.from_chis(chis)
    order = topological_order(digraph)
    if all(s.abf.rho == () and s.abf.boxes == 0 for s in chis):
        cls = SyntacticClass.VSSI
    elif all(s.abf.rho == () for s in chis):
        cls = SyntacticClass.SI
    elif order is not None:
        cls = SyntacticClass.AII
    else:
        cls = SyntacticClass.ATOMIC_REGULAR_IMP
    return cls, decomp, digraph, order


def _composed_class(f: modal.Formula) -> Optional[SyntacticClass]:
    """Sahlqvist / atomic inductive formulas: compositions of implications
    under [], &, |.  Follows the construction by which such a formula is
    semantically a negated antecedent, so composition with a single
    implication leaf is excluded here (it was already tried directly)."""
    leaves: list[modal.Formula] = []

    def walk(g: modal.Formula) -> None:
        if isinstance(g, modal.Box):
            walk(g.body)
        elif isinstance(g, (modal.And, modal.Or)):
            walk(g.lhs)
            walk(g.rhs)
        else:
            leaves.append(g)

    walk(f)
    classes = []
    for leaf in leaves:
        parts = _implication_parts(leaf)
        if parts is None:
            return None
        classes.append(parts[0])
    implication_classes = {
        SyntacticClass.VSSI,
        SyntacticClass.SI,
        SyntacticClass.AII,
    }
    if any(c not in implication_classes for c in classes):
        return None
    if all(c in (SyntacticClass.VSSI, SyntacticClass.SI) for c in classes):
        return SyntacticClass.SF
    return SyntacticClass.AIF


def classify(f: modal.Formula) -> ClassificationReport:
    """Assign the most specific syntactic class; for implication classes
    the report carries the antecedent decomposition, dependency digraph
    and (when acyclic) a topological order."""
    pol = polarity_map(f)
    letters = modal.prop_letters(f)
    if not letters:
        return ClassificationReport(f, SyntacticClass.CLOSED, True, pol)
    if all(p is not Polarity.BOTH for p in pol.values()):
        return ClassificationReport(f, SyntacticClass.UNIFORM, True, pol)
    parts = _implication_parts(f)
    if parts is not None:
        cls, decomp, digraph, order = parts
        return ClassificationReport(
            f,
            cls,
            decomp.definite,
            pol,
            decomposition=decomp,
            digraph=digraph,
            order=tuple(order) if order is not None else None,
            consequent=f.rhs,
        )
    composed = _composed_class(f)
    if composed is not None:
        return ClassificationReport(f, composed, False, pol)
    return ClassificationReport(f, SyntacticClass.UNCLASSIFIED, False, pol)


# ---------------------------------------------------------------------------
# Stable text serialization (used by the CLI and by exact-match goldens)


def serialize_report(report: ClassificationReport) -> str:
    lines = [f"formula: {modal.print_modal(report.formula)}"]
    lines.append(f"class: {report.syntactic_class.name}")
    lines.append(f"definite: {'yes' if report.definite else 'no'}")
    letters = modal.prop_letters(report.formula)
    if letters:
        pol = ", ".join(f"{p}={report.polarity[p].value}" for p in letters)
        lines.append(f"polarity: {pol}")
    else:
        lines.append("polarity: (no letters)")
    if report.decomposition is not None:
        chis = report.decomposition.chis
        if chis:
            shown = "; ".join(
                f"{modal.print_modal(s.formula)} (rho=[{', '.join(s.abf.rho)}], "
                f"k={s.abf.boxes}, head={s.abf.head})"
                for s in chis
            )
            lines.append(f"box-formulas: {shown}")
        else:
            lines.append("box-formulas: (none)")
        gammas = report.decomposition.gammas
        if gammas:
            lines.append(
                "negative-parts: "
                + "; ".join(modal.print_modal(s.formula) for s in gammas)
            )
        else:
            lines.append("negative-parts: (none)")
    if report.digraph is not None:
        edges = sorted(report.digraph.edges)
        shown = ", ".join(f"{a}->{b}" for a, b in edges) if edges else "(no edges)"
        lines.append(f"digraph: {shown}")
        if report.order is not None:
            lines.append(f"order: {', '.join(report.order)}")
        else:
            lines.append("order: (cyclic)")
    if not report.supported:
        lines.append("note: unsupported shape; no elementarity claim is made")
    return "\n".join(lines)
