"""Vectorized finite-model evaluation used by the exhaustive sweeps.

Everything here is an implementation detail behind the semantics-module
contracts: results are bit-for-bit the same as the plain recursive
evaluators (the test suite cross-checks this on random inputs), just
computed for whole batches of frames, valuations and assignments at
once with numpy.

Representation: a batch of frames is a boolean tensor ``rels[f, i, j]``.
First-order truth values are labeled boolean arrays whose axes are the
frame batch, one axis of size 2^n per universally-interpreted predicate
(subsets of W indexed by bitmask), and one axis of size n per free
individual variable.
"""

from __future__ import annotations

from typing import Iterable, Optional

import numpy as np

from . import fol, modal, semantics
from .errors import ResourceCap, UnboundVariable

_CHUNK = 4096
_MAX_ELEMENTS = 200_000_000


def rel_tensor(n: int, masks: Iterable[int]) -> np.ndarray:
    masks_arr = np.asarray(list(masks), dtype=np.int64)
    shifts = (np.arange(n)[:, None] * n + np.arange(n)[None, :]).astype(np.int64)
    return ((masks_arr[:, None, None] >> shifts[None, :, :]) & 1).astype(bool)


def subset_table(n: int) -> np.ndarray:
    """tab[s, w] = world w belongs to the subset with bitmask s."""
    return ((np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


# ---------------------------------------------------------------------------
# Modal side: full-shape arrays (frames, one axis per letter, worlds)


def modal_extension(rels: np.ndarray, f: modal.Formula, letters: tuple[str, ...]):
    """Extension of f on every frame, under every valuation of letters.

    Result shape: (frames, 2^n per letter in sorted order, n).
    """
    n = rels.shape[1]
    names = tuple(sorted(letters))
    shape = (rels.shape[0],) + (1 << n,) * len(names) + (n,)
    if int(np.prod(shape)) > _MAX_ELEMENTS:
        raise ResourceCap("modal sweep too large")
    tab = subset_table(n)
    rels_u8 = rels.astype(np.uint8)

    def dia(child: np.ndarray) -> np.ndarray:
        return np.einsum("fij,f...j->f...i", rels_u8, child.astype(np.uint8)) > 0

    def go(g: modal.Formula) -> np.ndarray:
        if isinstance(g, modal.Bottom):
            return np.broadcast_to(False, shape)
        if isinstance(g, modal.Top):
            return np.broadcast_to(True, shape)
        if isinstance(g, modal.Prop):
            axis = 1 + names.index(g.name)
            view_shape = [1] * len(shape)
            view_shape[axis] = 1 << n
            view_shape[-1] = n
            return np.broadcast_to(tab.reshape(view_shape), shape)
        if isinstance(g, modal.Not):
            return ~go(g.body)
        if isinstance(g, modal.And):
            return go(g.lhs) & go(g.rhs)
        if isinstance(g, modal.Or):
            return go(g.lhs) | go(g.rhs)
        if isinstance(g, modal.Implies):
            return ~go(g.lhs) | go(g.rhs)
        if isinstance(g, modal.Iff):
            return ~(go(g.lhs) ^ go(g.rhs))
        if isinstance(g, modal.Dia):
            return dia(np.ascontiguousarray(go(g.body)))
        if isinstance(g, modal.Box):
            return ~dia(np.ascontiguousarray(~go(g.body)))
        raise TypeError(f"not a modal formula: {g!r}")

    return go(f)


def modal_validity(rels: np.ndarray, f: modal.Formula) -> np.ndarray:
    """valid[f, w]: frame validity of f at world w, per frame."""
    letters = modal.prop_letters(f)
    ext = modal_extension(rels, f, letters)
    if len(letters) == 0:
        return ext
    return ext.all(axis=tuple(range(1, 1 + len(letters))))


# ---------------------------------------------------------------------------
# First-order side: labeled minimal-axis arrays


def _label_key(label):
    if label == "F":
        return (0, "")
    kind, name = label
    return ((1, name) if kind == "P" else (2, name))


def _axis_size(label, n_frames: int, n: int) -> int:
    if label == "F":
        return n_frames
    kind, _ = label
    return (1 << n) if kind == "P" else n


class _LabeledEval:
    def __init__(self, rels: np.ndarray):
        self.rels = rels
        self.n = rels.shape[1]
        self.n_frames = rels.shape[0]
        self.tab = subset_table(self.n)

    def _expand(self, labels, arr, target):
        """Insert singleton axes so arr lines up with the target labels."""
        out = arr
        for i, label in enumerate(target):
            if i >= out.ndim or (i < len(labels) and labels[i] != label) or label not in labels:
                out = np.expand_dims(out, i)
        return out

    def _merge(self, a_labels, a_arr, b_labels, b_arr):
        target = tuple(sorted(set(a_labels) | set(b_labels), key=_label_key))
        return target, self._align(a_labels, a_arr, target), self._align(b_labels, b_arr, target)

    def _align(self, labels, arr, target):
        out = arr
        pos = 0
        for i, label in enumerate(target):
            if pos < len(labels) and labels[pos] == label:
                pos += 1
            else:
                out = np.expand_dims(out, i)
        count = 1
        for label in target:
            count *= _axis_size(label, self.n_frames, self.n)
        if count > _MAX_ELEMENTS:
            raise ResourceCap("first-order sweep too large")
        return out

    def eval(self, f: fol.FO):
        n = self.n
        if isinstance(f, fol.TrueLit):
            return (), np.bool_(True)
        if isinstance(f, fol.FalseLit):
            return (), np.bool_(False)
        if isinstance(f, fol.Eq):
            if f.lhs == f.rhs:
                return (), np.bool_(True)
            labels = tuple(sorted((("v", f.lhs), ("v", f.rhs)), key=_label_key))
            return labels, np.eye(n, dtype=bool)
        if isinstance(f, fol.Rel):
            if f.lhs == f.rhs:
                idx = np.arange(n)
                return ("F", ("v", f.lhs)), self.rels[:, idx, idx]
            if f.lhs < f.rhs:
                return ("F", ("v", f.lhs), ("v", f.rhs)), self.rels
            return ("F", ("v", f.rhs), ("v", f.lhs)), self.rels.transpose(0, 2, 1)
        if isinstance(f, fol.Pred):
            return (("P", f.sym), ("v", f.arg)), self.tab
        if isinstance(f, fol.Not):
            labels, arr = self.eval(f.body)
            return labels, ~arr
        if isinstance(f, (fol.And, fol.Or)):
            labels: tuple = ()
            acc = np.bool_(isinstance(f, fol.And))
            for part in f.parts:
                p_labels, p_arr = self.eval(part)
                labels, acc, p_arr = self._merge(labels, acc, p_labels, p_arr)
                acc = (acc & p_arr) if isinstance(f, fol.And) else (acc | p_arr)
            return labels, acc
        if isinstance(f, fol.Implies):
            a_labels, a_arr = self.eval(f.lhs)
            b_labels, b_arr = self.eval(f.rhs)
            labels, a_arr, b_arr = self._merge(a_labels, a_arr, b_labels, b_arr)
            return labels, ~a_arr | b_arr
        if isinstance(f, (fol.Forall, fol.Exists)):
            labels, arr = self.eval(f.body)
            label = ("v", f.var)
            if label not in labels:
                return labels, arr  # vacuous: domains are nonempty
            axis = labels.index(label)
            reduced = arr.all(axis=axis) if isinstance(f, fol.Forall) else arr.any(axis=axis)
            return tuple(lb for lb in labels if lb != label), reduced

    def truth_over_x(self, f: fol.FO) -> np.ndarray:
        """Truth per frame and per value of x; other free variables are
        not allowed and predicates must not occur."""
        labels, arr = self.eval(f)
        stray = [lb for lb in labels if lb not in ("F", ("v", "x"))]
        if stray:
            names = ", ".join(lb[1] for lb in stray)
            raise UnboundVariable(
                f"formula mentions symbols with no interpretation: {names}"
            )
        target = ("F", ("v", "x"))
        arr = self._align(labels, arr, target)
        return np.broadcast_to(arr, (self.n_frames, self.n))

    def so_validity(self, so: fol.SO) -> np.ndarray:
        labels, arr = self.eval(so.matrix)
        pred_axes = tuple(i for i, lb in enumerate(labels) if lb[0] == "P")
        for i, lb in enumerate(labels):
            if isinstance(lb, tuple) and lb[0] == "P" and lb[1] not in so.prefix:
                raise ValueError(f"predicate {lb[1]} not bound by the prefix")
        if pred_axes:
            arr = arr.all(axis=pred_axes)
            labels = tuple(lb for i, lb in enumerate(labels) if i not in pred_axes)
        target = ("F", ("v", "x"))
        arr = self._align(labels, arr, target)
        return np.broadcast_to(arr, (self.n_frames, self.n))


def fo_truth(rels: np.ndarray, f: fol.FO) -> np.ndarray:
    return _LabeledEval(rels).truth_over_x(f)


def so_validity(rels: np.ndarray, so: fol.SO) -> np.ndarray:
    return _LabeledEval(rels).so_validity(so)


def st_adequate(rels: np.ndarray, f: modal.Formula, st: fol.FO) -> bool:
    """Model-level adequacy: modal truth equals the translation's truth
    on every frame in the batch, every valuation, every world."""
    letters = tuple(sorted(modal.prop_letters(f)))
    ext = modal_extension(rels, f, letters)
    ev = _LabeledEval(rels)
    labels, arr = ev.eval(st)
    target = ("F",) + tuple(("P", fol.pred_sym(p)) for p in letters) + (("v", "x"),)
    if tuple(sorted(set(labels) - set(target), key=_label_key)):
        raise ValueError("translation mentions unexpected symbols")
    arr = ev._align(labels, arr, target)
    return bool(np.array_equal(ext, np.broadcast_to(arr, ext.shape)))


# ---------------------------------------------------------------------------
# Oracle drivers


def _mask_chunks(total_bits: int):
    total = 1 << total_bits
    for start in range(0, total, _CHUNK):
        yield range(start, min(start + _CHUNK, total))


def _first_mismatch(
    n: int,
    masks,
    mv: np.ndarray,
    ft: np.ndarray,
) -> Optional[semantics.Counterexample]:
    diff = mv ^ ft
    if not diff.any():
        return None
    i, w = np.argwhere(diff)[0]
    frame = semantics.Frame.from_mask(n, masks[int(i)])
    direction = "modal-but-not-fo" if mv[i, w] else "fo-but-not-modal"
    return semantics.Counterexample(frame, int(w), direction)


def check_local_correspondence(
    f: modal.Formula,
    alpha: fol.FO,
    max_n: int,
    sample4: int = 0,
    seed: int = semantics.DEFAULT_SEED,
    enum_cap: int = semantics.DEFAULT_MAX_FRAME_N,
) -> Optional[semantics.Counterexample]:
    for n in range(1, max_n + 1):
        if n > enum_cap:
            raise ResourceCap(f"frame enumeration capped at size {enum_cap}")
        for chunk in _mask_chunks(n * n):
            masks = list(chunk)
            rels = rel_tensor(n, masks)
            bad = _first_mismatch(
                n, masks, modal_validity(rels, f), fo_truth(rels, alpha)
            )
            if bad is not None:
                return bad
    if sample4:
        all_masks = [fr.mask for fr in semantics.sample_frames(4, sample4, seed)]
        for start in range(0, len(all_masks), _CHUNK):
            masks = all_masks[start : start + _CHUNK]
            rels = rel_tensor(4, masks)
            bad = _first_mismatch(
                4, masks, modal_validity(rels, f), fo_truth(rels, alpha)
            )
            if bad is not None:
                return bad
    return None


def fo_equivalent(
    a: fol.FO,
    b: fol.FO,
    max_n: int,
    enum_cap: int = semantics.DEFAULT_MAX_FRAME_N,
):
    """First (frame, assignment) where the formulas disagree, or None."""
    for n in range(1, max_n + 1):
        if n > enum_cap:
            raise ResourceCap(f"frame enumeration capped at size {enum_cap}")
        for chunk in _mask_chunks(n * n):
            masks = list(chunk)
            rels = rel_tensor(n, masks)
            ta = fo_truth(rels, a)
            tb = fo_truth(rels, b)
            diff = ta ^ tb
            if diff.any():
                i, w = np.argwhere(diff)[0]
                frame = semantics.Frame.from_mask(n, masks[int(i)])
                return frame, {"x": int(w)}
    return None
