"""Exponent profiles of subsets of Z/pZ relative to an additive generator.

Fix d != 0.  Every x in Z/pZ is r*d for exactly one r in [0, p-1], its
exponent.  A *gap* is a maximal run of exponents whose multiples are
missing from X, and a *block* a maximal run of exponents present.

Two conventions for runs:

``linear``
    runs live in the window [0, p-1] and do not wrap;
``cyclic``
    p-1 and 0 are adjacent, so a run may wrap around.
"""
from __future__ import annotations

from dataclasses import dataclass

from .classify import ap_witnesses
from .errors import HypothesisViolation
from .sets import ModSet, is_critical_pair

MODES = ("linear", "cyclic")


def mod_inverse(a: int, p: int) -> int:
    """Inverse of a modulo the prime p."""
    if a % p == 0:
        raise ZeroDivisionError(f"{a} is not invertible mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class GapProfile:
    modulus: int
    generator: int
    mode: str
    exponents: tuple[int, ...]
    blocks: tuple[tuple[int, int], ...]
    gaps: tuple[tuple[int, int], ...]
    longest_gap: int

    def to_dict(self) -> dict:
        return {
            "p": self.modulus,
            "d": self.generator,
            "mode": self.mode,
            "exponents": list(self.exponents),
            "blocks": [list(b) for b in self.blocks],
            "longest_gap": self.longest_gap,
        }


def _runs(present: list[bool], cyclic: bool, want: bool) -> list[tuple[int, int]]:
    """Maximal runs of indices with ``present[i] == want`` as (first, last).

    In cyclic mode a run crossing p-1 -> 0 is reported once, with
    ``last < first``.
    """
    p = len(present)
    runs = []
    i = 0
    while i < p:
        if present[i] == want:
            j = i
            while j + 1 < p and present[j + 1] == want:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    if cyclic and len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == p - 1:
        first, last = runs.pop(0), runs.pop()
        runs.append((last[0], first[1]))
    return runs


def _run_length(run: tuple[int, int], p: int) -> int:
    first, last = run
    return (last - first) % p + 1


def exponent_profile(X: ModSet, d: int, mode: str = "linear") -> GapProfile:
    if mode not in MODES:
        raise ValueError(f"unknown gap mode {mode!r}")
    if not len(X):
        raise ValueError("exponent profile needs a nonempty set")
    p = X.modulus
    d %= p
    if d == 0:
        raise ValueError("generator must be nonzero mod p")
    inv = mod_inverse(d, p)
    exps = sorted(x * inv % p for x in X.elements)
    present = [False] * p
    for r in exps:
        present[r] = True
    cyclic = mode == "cyclic"
    blocks = _runs(present, cyclic, True)
    gaps = _runs(present, cyclic, False)
    longest = max((_run_length(g, p) for g in gaps), default=0)
    return GapProfile(p, d, mode, tuple(exps), tuple(blocks), tuple(gaps), longest)


def longest_gap_over_generators(X: ModSet, mode: str = "linear") -> list[tuple[int, int]]:
    """(d, longest gap w.r.t. d) for every d in 1..p-1."""
    return [(d, exponent_profile(X, d, mode).longest_gap) for d in range(1, X.modulus)]


@dataclass(frozen=True)
class GapCheck:
    """Outcome of checking the gap lower bound on one pair."""

    modulus: int
    size_a: int
    mode: str
    profiles: tuple[tuple[int, int, GapProfile], ...]  # (start, d, profile of B - start)
    min_gap: int

    @property
    def passed(self) -> bool:
        return self.min_gap >= self.size_a

    def to_dict(self) -> dict:
        return {
            "p": self.modulus,
            "size_a": self.size_a,
            "mode": self.mode,
            "min_gap": self.min_gap,
            "passed": self.passed,
            "profiles": [dict(prof.to_dict(), start=start) for start, _, prof in self.profiles],
        }


def check_gap_theorem(A: ModSet, B: ModSet, mode: str = "linear",
                      *, assume_critical: bool = False) -> GapCheck:
    """Longest gap of B, read in the coordinates of the progression A.

    Requires p >= |A| + |B|, |A| >= 5, A a progression and (A, B)
    critical.  For each reading A = {s + i*d} the set B - s is profiled
    with respect to d; the smallest longest-gap over those readings is
    compared with |A|.
    """
    if A.modulus != B.modulus:
        raise ValueError("operands live in different groups")
    p = A.modulus
    if p < len(A) + len(B):
        raise HypothesisViolation(f"p = {p} < |A| + |B| = {len(A) + len(B)}")
    if len(A) < 5:
        raise HypothesisViolation(f"|A| = {len(A)} < 5")
    witnesses = ap_witnesses(A)
    if not witnesses:
        raise HypothesisViolation(f"{A} is not an arithmetic progression")
    if not assume_critical and not is_critical_pair(A, B):
        raise HypothesisViolation("(A, B) is not a critical pair")
    profiles = []
    for w in witnesses:
        prof = exponent_profile(B.translate(-w.start), w.difference, mode)
        profiles.append((w.start, w.difference, prof))
    return GapCheck(p, len(A), mode, tuple(profiles), min(pr.longest_gap for _, _, pr in profiles))
