"""Subset tables and the chunked pair stream for one sweep."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .. import _pykernel as K
from ..classify import predict_critical, structural_verdict
from ..errors import HypothesisViolation
from ..sets import IntSet, ModSet
from .spec import SweepSpec


@dataclass
class Universe:
    """Admissible subsets of the window (or of Z/pZ), sorted by bitmask."""

    spec: SweepSpec
    masks: np.ndarray    # uint64, ascending
    sizes: np.ndarray    # int32
    maxel: np.ndarray    # int32, largest element / canonical residue
    struct: np.ndarray   # uint8, predicted criticality of (S, S)
    canon: np.ndarray    # int32, translation class index (Z/pZ)
    shift: np.ndarray    # int32, S = class representative + shift
    colstop: np.ndarray  # int64, exclusive column bound used by the T5 gate

    @property
    def kind(self) -> int:
        return K.KIND_MOD if self.spec.is_mod else K.KIND_INT

    @property
    def norm(self) -> int:
        if not self.spec.normalize:
            return K.NORM_NONE
        return K.NORM_CANON if self.spec.is_mod else K.NORM_MIN0

    def subset(self, i: int):
        m = int(self.masks[i])
        elems = [k for k in range(self.spec.width) if m >> k & 1]
        if self.spec.is_mod:
            return ModSet(self.spec.prime, elems)
        return IntSet(elems)

    def rows(self) -> np.ndarray:
        """Row indices that start pairs, in enumeration order."""
        if self.norm == K.NORM_CANON:
            return np.flatnonzero(self.shift == 0).astype(np.int64)
        return np.arange(len(self.masks), dtype=np.int64)

    def chunks(self) -> list[np.ndarray]:
        """Contiguous row ranges of roughly ``chunk_pairs`` pairs each.

        Depends only on the spec, never on the worker count.
        """
        rows = self.rows()
        if not len(rows):
            return []
        S = len(self.masks)
        work = np.full(len(rows), S, dtype=np.int64) if self.norm == K.NORM_CANON else S - rows
        cum = np.cumsum(work)
        n_chunks = int(min(len(rows), max(1, -(-int(cum[-1]) // self.spec.chunk_pairs)), 4096))
        targets = cum[-1] * np.arange(1, n_chunks) / n_chunks
        cuts = np.unique(np.searchsorted(cum, targets, side="left") + 1)
        return [c for c in np.split(rows, cuts) if len(c)]


def _all_masks(width: int, lo: int, hi: int) -> np.ndarray:
    masks = np.arange(1 << width, dtype=np.uint64)
    pc = np.bitwise_count(masks)
    return masks[(pc >= lo) & (pc <= hi)]


def _rotate(masks: np.ndarray, t: int, p: int) -> np.ndarray:
    if t == 0:
        return masks.copy()
    full = np.uint64((1 << p) - 1)
    return ((masks << np.uint64(t)) | (masks >> np.uint64(p - t))) & full


def _struct_table(spec: SweepSpec, masks: np.ndarray, sizes: np.ndarray, uni: Universe) -> np.ndarray:
    out = np.zeros(len(masks), dtype=np.uint8)
    for i in range(len(masks)):
        if sizes[i] < 2:
            continue
        S = uni.subset(i)
        try:
            verdict = predict_critical(S, S)
        except HypothesisViolation:
            if not spec.relax:
                continue
            verdict = structural_verdict(S, S)
        out[i] = verdict.critical
    return out


def build_universe(spec: SweepSpec) -> Universe:
    w = spec.width
    masks = _all_masks(w, spec.min_size, spec.upper_size)
    sizes = np.bitwise_count(masks).astype(np.int32)
    maxel = np.array([int(m).bit_length() - 1 for m in masks], dtype=np.int32)
    S = len(masks)
    canon = np.zeros(S, dtype=np.int32)
    shift = np.zeros(S, dtype=np.int32)
    colstop = np.full(S, S, dtype=np.int64)

    if spec.is_mod and spec.normalize and S:
        p = spec.prime
        rots = np.stack([_rotate(masks, t, p) for t in range(p)], axis=1)
        u = rots.argmin(axis=1)
        reps = rots[np.arange(S), u]
        _, canon_idx = np.unique(reps, return_inverse=True)
        canon = canon_idx.astype(np.int32)
        shift = ((p - u) % p).astype(np.int32)

    if spec.is_mod and spec.theorem == "T5" and S:
        # a_m + b_n < p  <=>  mask_B < 2**(p - a_m); masks are sorted
        bounds = np.array([1 << (spec.prime - int(m)) for m in maxel], dtype=np.uint64)
        colstop = np.searchsorted(masks, bounds, side="left").astype(np.int64)
        colstop = np.maximum(colstop, np.arange(S, dtype=np.int64))

    uni = Universe(spec, masks, sizes, maxel, np.zeros(S, dtype=np.uint8), canon, shift, colstop)
    uni.struct = _struct_table(spec, masks, sizes, uni)
    return uni


def enumerate_pairs(spec: SweepSpec) -> Iterator[tuple]:
    """Yield each unordered pair {A, B} of the spec's universe once.

    With normalization on, one representative per joint-translation class
    is produced, exactly the pairs the sweep kernel visits.  Theorem
    hypotheses are not applied here.  Raises BudgetExceeded like a sweep.
    """
    spec = spec.validate()
    uni = build_universe(spec)
    masks = [int(m) for m in uni.masks]
    canon, shift = uni.canon.tolist(), uni.shift.tolist()
    S = len(masks)
    half = (spec.width - 1) // 2
    for i in uni.rows().tolist():
        if uni.norm == K.NORM_CANON:
            a_full = int(uni.sizes[i]) == spec.width
            for j in range(S):
                if canon[j] < canon[i]:
                    continue
                if a_full and shift[j] != 0:
                    continue
                if not a_full and canon[j] == canon[i] and shift[j] > half:
                    continue
                yield uni.subset(i), uni.subset(j)
        else:
            for j in range(i, S):
                if uni.norm == K.NORM_MIN0 and not (masks[i] | masks[j]) & 1:
                    continue
                yield uni.subset(i), uni.subset(j)
