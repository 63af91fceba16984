"""Structural detectors and the sumset-free criticality predictor.

The predictor never evaluates a sumset.  It decides criticality from
shape alone:

* ``A != B``                        -> not critical
* ``A == B``, ``|A|`` in {2, 3}     -> critical
* ``A == B``, ``|A| == 4``          -> critical iff A = {a, a+d, c, c+d}
* ``A == B``, ``|A| >= 5``          -> critical iff A is an arithmetic progression

In Z/pZ this is only claimed when p >= |A| + |B| - 2; outside that range
:func:`predict_critical` raises :class:`HypothesisViolation`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .errors import HypothesisViolation
from .sets import AnySet, GroupContext, IntSet, ModSet, coerce_pair


class CaseTag(str, enum.Enum):
    NOT_CRITICAL = "NotCritical"
    EQUAL_SMALL = "EqualSmall"
    BI_PAIR = "BiPair"
    STANDARD_PAIR = "StandardPair"


@dataclass(frozen=True)
class APWitness:
    start: int
    difference: int
    length: int

    def elements(self, modulus: int | None = None) -> list[int]:
        vals = [self.start + i * self.difference for i in range(self.length)]
        if modulus is not None:
            vals = [v % modulus for v in vals]
        return vals

    def to_dict(self) -> dict:
        return {"start": self.start, "diff": self.difference, "len": self.length}

    def __str__(self) -> str:
        return f"({self.start},{self.difference},{self.length})"


@dataclass(frozen=True)
class BiPairWitness:
    a: int
    c: int
    d: int

    def elements(self, modulus: int | None = None) -> list[int]:
        vals = [self.a, self.a + self.d, self.c, self.c + self.d]
        if modulus is not None:
            vals = [v % modulus for v in vals]
        return vals

    def to_dict(self) -> dict:
        return {"a": self.a, "c": self.c, "d": self.d}

    def __str__(self) -> str:
        return f"({self.a},{self.c},{self.d})"


Witness = Union[APWitness, BiPairWitness]


@dataclass(frozen=True)
class PairClassification:
    critical: bool
    case_tag: CaseTag
    witness: Optional[Witness] = None

    def __post_init__(self):
        if (self.case_tag is not CaseTag.NOT_CRITICAL) != self.critical:
            raise ValueError("case tag disagrees with critical flag")
        if self.case_tag is CaseTag.STANDARD_PAIR and not isinstance(self.witness, APWitness):
            raise ValueError("StandardPair needs an APWitness")
        if self.case_tag is CaseTag.BI_PAIR and not isinstance(self.witness, BiPairWitness):
            raise ValueError("BiPair needs a BiPairWitness")

    def to_dict(self) -> dict:
        return {
            "critical": self.critical,
            "case_tag": self.case_tag.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }

    def __str__(self) -> str:
        if self.witness is None:
            return self.case_tag.value
        return f"{self.case_tag.value}{self.witness}"


def _as_set(X, ctx: GroupContext | None) -> AnySet:
    return coerce_pair(X, X, ctx)[0]


def ap_witnesses(X, ctx: GroupContext | None = None) -> list[APWitness]:
    """Every (start, difference) reading of X as an arithmetic progression.

    In Z the only reading with positive difference is returned.  In Z/pZ
    the witnesses are sorted by difference in [1, p-1].  Candidate
    differences come from element pairs, so the cost does not grow with p.
    """
    X = _as_set(X, ctx)
    m = len(X)
    if m < 2:
        raise ValueError("progression detection needs |X| >= 2")
    elems = X.elements
    if isinstance(X, IntSet):
        d = elems[1] - elems[0]
        if all(y - x == d for x, y in zip(elems, elems[1:])):
            return [APWitness(elems[0], d, m)]
        return []

    p = X.modulus
    members = set(elems)
    if m == p:
        return [APWitness(0, d, m) for d in range(1, p)]
    found = []
    for d in sorted({(y - elems[0]) % p for y in elems[1:]} | {(elems[0] - y) % p for y in elems[1:]}):
        # a progression with m < p has exactly one element with no predecessor
        heads = [x for x in elems if (x - d) % p not in members]
        if len(heads) != 1:
            continue
        start = heads[0]
        if all((start + i * d) % p in members for i in range(m)):
            found.append(APWitness(start, d, m))
    return found


def detect_ap(X, ctx: GroupContext | None = None) -> Optional[APWitness]:
    """Witness that X is a standard set, or None.

    Z: the positive common difference.  Z/pZ: the smallest difference
    in [1, p-1] among all witnesses.
    """
    found = ap_witnesses(X, ctx)
    return found[0] if found else None


def detect_bi_pair(X, ctx: GroupContext | None = None) -> Optional[BiPairWitness]:
    """Witness that the 4-set X equals {a, a+d, c, c+d}, or None.

    Among all witnesses the one with the least d is returned, then least
    a, then least c (d taken in [1, p-1] for Z/pZ).
    """
    X = _as_set(X, ctx)
    if len(X) != 4:
        raise ValueError(f"bi-pair detection needs |X| = 4, got {len(X)}")
    x = X.elements
    if isinstance(X, IntSet):
        if x[1] - x[0] == x[3] - x[2]:
            return BiPairWitness(x[0], x[2], x[1] - x[0])
        return None

    p = X.modulus
    target = set(x)
    best = None
    for i, j in combinations(range(4), 2):
        rest = [k for k in range(4) if k not in (i, j)]
        for u, v in ((x[i], x[j]), (x[j], x[i])):
            d = (v - u) % p
            for s, t in ((x[rest[0]], x[rest[1]]), (x[rest[1]], x[rest[0]])):
                if (t - s) % p != d:
                    continue
                a, c = min(u, s), max(u, s)
                if {a, (a + d) % p, c, (c + d) % p} == target:
                    cand = (d, a, c)
                    if best is None or cand < best:
                        best = cand
    if best is None:
        return None
    d, a, c = best
    return BiPairWitness(a, c, d)


def is_standard_pair(A, B, ctx: GroupContext | None = None) -> Optional[APWitness]:
    """AP witness of A when A == B is a standard set, else None."""
    A, B = coerce_pair(A, B, ctx)
    if len(A) < 2 or len(B) < 2:
        raise ValueError("standard pairs need |A|, |B| >= 2")
    if A != B:
        return None
    return detect_ap(A)


def structural_verdict(A: AnySet, B: AnySet) -> PairClassification:
    """The case analysis itself, with no hypothesis gate."""
    if A != B:
        return PairClassification(False, CaseTag.NOT_CRITICAL)
    m = len(A)
    if m in (2, 3):
        return PairClassification(True, CaseTag.EQUAL_SMALL)
    if m == 4:
        w = detect_bi_pair(A)
        if w is None:
            return PairClassification(False, CaseTag.NOT_CRITICAL)
        return PairClassification(True, CaseTag.BI_PAIR, w)
    w = detect_ap(A)
    if w is None:
        return PairClassification(False, CaseTag.NOT_CRITICAL)
    return PairClassification(True, CaseTag.STANDARD_PAIR, w)


def predict_critical(A, B, ctx: GroupContext | None = None) -> PairClassification:
    """Decide criticality of the unordered pair {A, B} from structure alone.

    Raises HypothesisViolation in Z/pZ when p < |A| + |B| - 2.
    """
    A, B = coerce_pair(A, B, ctx)
    if len(A) < 2 or len(B) < 2:
        raise ValueError("critical pairs need |A|, |B| >= 2")
    if isinstance(A, ModSet) and A.modulus < len(A) + len(B) - 2:
        raise HypothesisViolation(
            f"p = {A.modulus} < |A| + |B| - 2 = {len(A) + len(B) - 2}; "
            "the characterization does not apply"
        )
    if len(A) > len(B):
        A, B = B, A
    return structural_verdict(A, B)
