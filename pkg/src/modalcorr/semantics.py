"""Finite Kripke semantics: frames, truth, validity, and the frame oracle.

Worlds are the integers ``0 .. size-1`` and every set of worlds is an
``int`` bitmask (bit w set iff world w is in the set), which keeps the
exhaustive sweeps cheap and gives a canonical enumeration order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional

from . import fol, modal
from .errors import ParseError, ResourceCap, UnboundVariable

#: default cap on exhaustive frame enumeration (2^(n*n) frames at size n)
DEFAULT_MAX_FRAME_N = 4

#: default cap on n*letters for valuation sweeps (2^cap valuations)
VALUATION_BITS_CAP = 16

#: seed used by the |W| = 4 sample when none is given
DEFAULT_SEED = 2024


@dataclass(frozen=True)
class Frame:
    """Finite frame: ``size`` worlds and successor bitmasks per world."""

    size: int
    succ: tuple[int, ...]

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a frame needs at least one world")
        if len(self.succ) != self.size:
            raise ValueError("successor table does not match frame size")
        full = (1 << self.size) - 1
        if any(row & ~full for row in self.succ):
            raise ValueError("successor mask out of range")

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "Frame":
        succ = [0] * size
        for i, j in pairs:
            if not (0 <= i < size and 0 <= j < size):
                raise ValueError(f"edge ({i},{j}) out of range for size {size}")
            succ[i] |= 1 << j
        return cls(size, tuple(succ))

    @classmethod
    def from_mask(cls, size: int, mask: int) -> "Frame":
        """Relation bits in row-major order: bit i*size+j is the edge i->j."""
        succ = []
        for i in range(size):
            succ.append((mask >> (i * size)) & ((1 << size) - 1))
        return cls(size, tuple(succ))

    @property
    def mask(self) -> int:
        out = 0
        for i, row in enumerate(self.succ):
            out |= row << (i * self.size)
        return out

    def pairs(self) -> Iterator[tuple[int, int]]:
        for i in range(self.size):
            row = self.succ[i]
            for j in range(self.size):
                if row & (1 << j):
                    yield (i, j)

    @classmethod
    def from_literal(cls, text: str) -> "Frame":
        """Parse the ``n;i->j,i->k`` frame literal."""
        head, _, tail = text.partition(";")
        try:
            size = int(head.strip())
        except ValueError:
            raise ParseError("frame literal must start with the world count", 1, 1)
        pairs = []
        tail = tail.strip()
        if tail:
            for chunk in tail.split(","):
                a, sep, b = chunk.partition("->")
                if not sep:
                    raise ParseError(f"bad edge {chunk!r} in frame literal", 1, 1)
                try:
                    pairs.append((int(a), int(b)))
                except ValueError:
                    raise ParseError(f"bad edge {chunk!r} in frame literal", 1, 1)
        return cls.from_pairs(size, pairs)

    def to_literal(self) -> str:
        edges = ",".join(f"{i}->{j}" for i, j in self.pairs())
        return f"{self.size};{edges}"


def worldset(worlds: Iterable[int]) -> int:
    mask = 0
    for w in worlds:
        mask |= 1 << w
    return mask


def worlds_of(mask: int) -> tuple[int, ...]:
    out = []
    w = 0
    while mask:
        if mask & 1:
            out.append(w)
        mask >>= 1
        w += 1
    return tuple(out)


def dia_image(frame: Frame, xs: int) -> int:
    """Worlds with some successor in xs (the semantic diamond)."""
    out = 0
    for w in range(frame.size):
        if frame.succ[w] & xs:
            out |= 1 << w
    return out


def box_image(frame: Frame, xs: int) -> int:
    """Worlds all of whose successors lie in xs (the semantic box)."""
    out = 0
    for w in range(frame.size):
        if frame.succ[w] & ~xs == 0:
            out |= 1 << w
    return out


def relation_image(frame: Frame, xs: int, k: int = 1) -> int:
    """k-step successor image R^k[xs]; k = 0 is the identity."""
    for _ in range(k):
        out = 0
        for w in worlds_of(xs):
            out |= frame.succ[w]
        xs = out
    return xs


def converse(frame: Frame) -> Frame:
    return Frame.from_pairs(frame.size, [(j, i) for i, j in frame.pairs()])


# ---------------------------------------------------------------------------
# Modal truth


def extension(f: modal.Formula, frame: Frame, valuation: Mapping[str, int]) -> int:
    """The set of worlds where f is true under the valuation, as a bitmask.

    Letters absent from the valuation denote the empty set.
    """
    full = (1 << frame.size) - 1
    if isinstance(f, modal.Bottom):
        return 0
    if isinstance(f, modal.Top):
        return full
    if isinstance(f, modal.Prop):
        return valuation.get(f.name, 0)
    if isinstance(f, modal.Not):
        return full & ~extension(f.body, frame, valuation)
    if isinstance(f, modal.And):
        return extension(f.lhs, frame, valuation) & extension(f.rhs, frame, valuation)
    if isinstance(f, modal.Or):
        return extension(f.lhs, frame, valuation) | extension(f.rhs, frame, valuation)
    if isinstance(f, modal.Implies):
        return (full & ~extension(f.lhs, frame, valuation)) | extension(
            f.rhs, frame, valuation
        )
    if isinstance(f, modal.Iff):
        a = extension(f.lhs, frame, valuation)
        b = extension(f.rhs, frame, valuation)
        return full & ~(a ^ b)
    if isinstance(f, modal.Dia):
        return dia_image(frame, extension(f.body, frame, valuation))
    if isinstance(f, modal.Box):
        return box_image(frame, extension(f.body, frame, valuation))
    raise TypeError(f"not a modal formula: {f!r}")


def valuations(frame: Frame, letters: tuple[str, ...]) -> Iterator[dict[str, int]]:
    """All valuations of the letters over the frame's powerset."""
    subsets = range(1 << frame.size)
    for combo in product(subsets, repeat=len(letters)):
        yield dict(zip(letters, combo))


def frame_valid_worlds(
    frame: Frame,
    f: modal.Formula,
    bits_cap: int = VALUATION_BITS_CAP,
) -> int:
    """Bitmask of worlds where f is valid (true under every valuation)."""
    letters = modal.prop_letters(f)
    if frame.size * len(letters) > bits_cap:
        raise ResourceCap(
            f"validity sweep needs 2^{frame.size * len(letters)} valuations"
        )
    acc = (1 << frame.size) - 1
    for val in valuations(frame, letters):
        acc &= extension(f, frame, val)
        if not acc:
            break
    return acc


def frame_valid_at(
    frame: Frame,
    world: int,
    f: modal.Formula,
    bits_cap: int = VALUATION_BITS_CAP,
) -> bool:
    """Local frame validity at one world."""
    if not 0 <= world < frame.size:
        raise ValueError(f"world {world} not in frame of size {frame.size}")
    letters = modal.prop_letters(f)
    if frame.size * len(letters) > bits_cap:
        raise ResourceCap(
            f"validity sweep needs 2^{frame.size * len(letters)} valuations"
        )
    bit = 1 << world
    for val in valuations(frame, letters):
        if not extension(f, frame, val) & bit:
            return False
    return True


# ---------------------------------------------------------------------------
# First- and second-order truth


def eval_fo(
    frame: Frame,
    assignment: Mapping[str, int],
    f: fol.FO,
    interpretation: Mapping[str, int] | None = None,
) -> bool:
    """Tarskian truth over the frame; predicate symbols read from the
    interpretation map (bitmask per symbol, missing symbols denote the
    empty set)."""
    interp = interpretation or {}

    def lookup(env: Mapping[str, int], name: str) -> int:
        if name in env:
            return env[name]
        raise UnboundVariable(f"variable {name} has no assigned world")

    def go(g: fol.FO, env: Mapping[str, int]) -> bool:
        if isinstance(g, fol.TrueLit):
            return True
        if isinstance(g, fol.FalseLit):
            return False
        if isinstance(g, fol.Eq):
            return lookup(env, g.lhs) == lookup(env, g.rhs)
        if isinstance(g, fol.Rel):
            return bool(frame.succ[lookup(env, g.lhs)] & (1 << lookup(env, g.rhs)))
        if isinstance(g, fol.Pred):
            return bool(interp.get(g.sym, 0) & (1 << lookup(env, g.arg)))
        if isinstance(g, fol.Not):
            return not go(g.body, env)
        if isinstance(g, fol.And):
            return all(go(h, env) for h in g.parts)
        if isinstance(g, fol.Or):
            return any(go(h, env) for h in g.parts)
        if isinstance(g, fol.Implies):
            return (not go(g.lhs, env)) or go(g.rhs, env)
        if isinstance(g, fol.Forall):
            return all(go(g.body, {**env, g.var: w}) for w in range(frame.size))
        if isinstance(g, fol.Exists):
            return any(go(g.body, {**env, g.var: w}) for w in range(frame.size))
        raise TypeError(f"not a first-order formula: {g!r}")

    return go(f, dict(assignment))


def eval_so(
    frame: Frame,
    assignment: Mapping[str, int],
    f: fol.SO,
    bits_cap: int = VALUATION_BITS_CAP,
) -> bool:
    """Truth of a universally predicate-quantified formula: conjunction
    over all interpretations of the prefix."""
    if frame.size * len(f.prefix) > bits_cap:
        raise ResourceCap(
            f"second-order sweep needs 2^{frame.size * len(f.prefix)} interpretations"
        )
    subsets = range(1 << frame.size)
    for combo in product(subsets, repeat=len(f.prefix)):
        interp = dict(zip(f.prefix, combo))
        if not eval_fo(frame, assignment, f.matrix, interp):
            return False
    return True


# ---------------------------------------------------------------------------
# Frame enumeration and the oracle


def enumerate_frames(n: int, max_n: int = DEFAULT_MAX_FRAME_N) -> Iterator[Frame]:
    """All 2^(n*n) frames on n worlds, in relation-bitmask order."""
    if n > max_n:
        raise ResourceCap(f"frame enumeration capped at size {max_n}")
    for mask in range(1 << (n * n)):
        yield Frame.from_mask(n, mask)


def sample_frames(n: int, count: int, seed: int = DEFAULT_SEED) -> list[Frame]:
    """Seeded pseudo-random frames: one getrandbits(n*n) draw per frame."""
    rng = random.Random(seed)
    return [Frame.from_mask(n, rng.getrandbits(n * n)) for _ in range(count)]


@dataclass(frozen=True)
class Counterexample:
    """A frame/world pair where modal validity and the first-order
    condition disagree."""

    frame: Frame
    world: int
    direction: str  # "modal-but-not-fo" or "fo-but-not-modal"

    def __str__(self) -> str:
        return f"{self.frame.to_literal()} @ {self.world} [{self.direction}]"


def _check_on_frame(
    frame: Frame, f: modal.Formula, alpha: fol.FO
) -> Optional[Counterexample]:
    valid = frame_valid_worlds(frame, f)
    for w in range(frame.size):
        modal_side = bool(valid & (1 << w))
        fo_side = eval_fo(frame, {"x": w}, alpha)
        if modal_side != fo_side:
            direction = "modal-but-not-fo" if modal_side else "fo-but-not-modal"
            return Counterexample(frame, w, direction)
    return None


def check_local_correspondence(
    f: modal.Formula,
    alpha: fol.FO,
    max_n: int,
    sample4: int = 0,
    seed: int = DEFAULT_SEED,
    enum_cap: int = DEFAULT_MAX_FRAME_N,
    use_fast: bool = True,
) -> Optional[Counterexample]:
    """Certify that alpha(x) is a local frame correspondent of f.

    Exhaustive over all frames with at most max_n worlds, then over
    sample4 seeded frames with 4 worlds.  Returns None on success or the
    first counterexample in enumeration order (frames by size then
    relation mask, worlds ascending).

    The vectorized engine and the plain per-frame sweep compute the same
    verdict; use_fast=False selects the reference path.
    """
    extra = free_vars_not_x(alpha)
    if extra:
        raise UnboundVariable(
            f"correspondent has free variables besides x: {sorted(extra)}"
        )
    if use_fast:
        from . import fastcheck

        return fastcheck.check_local_correspondence(
            f, alpha, max_n, sample4=sample4, seed=seed, enum_cap=enum_cap
        )
    for n in range(1, max_n + 1):
        for frame in enumerate_frames(n, max_n=enum_cap):
            bad = _check_on_frame(frame, f, alpha)
            if bad is not None:
                return bad
    if sample4:
        for frame in sample_frames(4, sample4, seed):
            bad = _check_on_frame(frame, f, alpha)
            if bad is not None:
                return bad
    return None


def free_vars_not_x(alpha: fol.FO) -> frozenset[str]:
    return fol.free_vars(alpha) - {"x"}
