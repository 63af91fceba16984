"""Finite sets in Z and Z/pZ, sumsets, restricted sumsets and the classical bounds.

Sets are immutable.  Set arithmetic runs on Python integers used as
bitmasks: an :class:`IntSet` is stored relative to its minimum, a
:class:`ModSet` by residue, and sums become shifts (Z) or cyclic
rotations (Z/pZ).  :func:`restricted_sumset_naive` is a deliberately
separate double loop used as the ground-truth oracle in tests.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import ModulusMismatch

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

# Above this span the bitmask would be too wide to be worth it.
_BITSET_SPAN = 1 << 16

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Integers:
    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ModP:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def __str__(self) -> str:
        return f"Z/{self.p}Z"


GroupContext = Union[Integers, ModP]
INTEGERS = Integers()


def _check_int64(x: int) -> None:
    if not INT64_MIN <= x <= INT64_MAX:
        raise OverflowError(f"{x} does not fit in a signed 64-bit integer")


def _sorted_distinct(elements: Iterable[int]) -> tuple[int, ...]:
    items = [int(e) for e in elements]
    out = tuple(sorted(items))
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate elements in {items}")
    return out


@dataclass(frozen=True)
class IntSet:
    """Finite set of integers, elements kept strictly increasing."""

    elements: tuple[int, ...]

    def __init__(self, elements: Iterable[int] = ()):
        elems = _sorted_distinct(elements)
        for e in elems:
            _check_int64(e)
        object.__setattr__(self, "elements", elems)

    @property
    def context(self) -> Integers:
        return INTEGERS

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"

    def translate(self, t: int) -> "IntSet":
        return IntSet(e + t for e in self.elements)

    def dilate(self, lam: int) -> "IntSet":
        if lam == 0:
            raise ValueError("dilation factor must be nonzero")
        return IntSet(lam * e for e in self.elements)

    def remove(self, x: int) -> "IntSet":
        return IntSet(e for e in self.elements if e != x)

    def issubset(self, other: "IntSet") -> bool:
        return set(self.elements) <= set(other.elements)


@dataclass(frozen=True)
class ModSet:
    """Subset of Z/pZ stored by canonical representatives 0..p-1."""

    modulus: int
    elements: tuple[int, ...]

    def __init__(self, modulus: int, elements: Iterable[int] = ()):
        ModP(modulus)  # primality gate
        elems = _sorted_distinct(elements)
        for e in elems:
            if not 0 <= e < modulus:
                raise ValueError(f"residue {e} outside [0, {modulus - 1}]")
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "elements", elems)

    @classmethod
    def reduce(cls, modulus: int, values: Iterable[int]) -> "ModSet":
        """Build a set from arbitrary integers, reducing each mod p."""
        return cls(modulus, {v % modulus for v in values})

    @property
    def context(self) -> ModP:
        return ModP(self.modulus)

    @property
    def mask(self) -> int:
        m = 0
        for e in self.elements:
            m |= 1 << e
        return m

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def __str__(self) -> str:
        return f"mod {self.modulus}: " + "{" + ",".join(map(str, self.elements)) + "}"

    def translate(self, t: int) -> "ModSet":
        return ModSet.reduce(self.modulus, (e + t for e in self.elements))

    def dilate(self, lam: int) -> "ModSet":
        if lam % self.modulus == 0:
            raise ValueError("dilation factor must be a unit mod p")
        return ModSet.reduce(self.modulus, (e * lam for e in self.elements))

    def remove(self, x: int) -> "ModSet":
        return ModSet(self.modulus, (e for e in self.elements if e != x))

    def issubset(self, other: "ModSet") -> bool:
        return self.modulus == other.modulus and set(self.elements) <= set(other.elements)


AnySet = Union[IntSet, ModSet]

_LITERAL = re.compile(r"^\s*(?:mod\s+(\d+)\s*:\s*)?\{(.*)\}\s*$")


def parse_set(text: str) -> AnySet:
    """Parse ``{e1,e2,...}`` or ``mod p: {r1,r2,...}``.

    Elements must be strictly increasing; duplicates and out-of-range
    residues are rejected.
    """
    m = _LITERAL.match(text)
    if not m:
        raise ValueError(f"not a set literal: {text!r}")
    body = m.group(2).strip()
    try:
        elems = [int(tok) for tok in body.split(",")] if body else []
    except ValueError:
        raise ValueError(f"non-integer element in {text!r}") from None
    for x, y in zip(elems, elems[1:]):
        if x == y:
            raise ValueError(f"duplicate element {x} in {text!r}")
        if x > y:
            raise ValueError(f"elements not strictly increasing in {text!r}")
    if m.group(1) is None:
        return IntSet(elems)
    return ModSet(int(m.group(1)), elems)


def make_set(elements: Iterable[int], ctx: GroupContext = INTEGERS) -> AnySet:
    if isinstance(ctx, ModP):
        return ModSet(ctx.p, elements)
    return IntSet(elements)


def coerce_pair(A, B, ctx: GroupContext | None = None) -> tuple[AnySet, AnySet]:
    """Bring two operands into one group, raising on a mismatch."""
    if ctx is None:
        ctx = A.context if isinstance(A, (IntSet, ModSet)) else (
            B.context if isinstance(B, (IntSet, ModSet)) else INTEGERS)
    out = []
    for X in (A, B):
        if isinstance(X, (IntSet, ModSet)):
            if X.context != ctx:
                raise ModulusMismatch(f"operand in {X.context} used in {ctx}")
            out.append(X)
        else:
            out.append(make_set(X, ctx))
    return out[0], out[1]


def _bits_from(elements: Iterable[int], lo: int) -> int:
    m = 0
    for e in elements:
        m |= 1 << (e - lo)
    return m


def _decode(bits: int, lo: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1 + lo)
        bits ^= low
    return out


def _rotate(x: int, k: int, p: int, full: int) -> int:
    if k == 0:
        return x
    return ((x << k) | (x >> (p - k))) & full


def _span(X: AnySet) -> int:
    return X.elements[-1] - X.elements[0] if X.elements else 0


def _int_result(values: Iterable[int]) -> IntSet:
    vals = list(values)
    for v in vals:
        if not INT64_MIN <= v <= INT64_MAX:
            raise OverflowError(f"sum {v} overflows a signed 64-bit integer")
    return IntSet(vals)


def _sums(A: AnySet, B: AnySet, restricted: bool) -> AnySet:
    if isinstance(A, ModSet):
        p = A.modulus
        if p > _BITSET_SPAN:
            return ModSet.reduce(p, _loop_sums(A, B, restricted))
        full = (1 << p) - 1
        bB = B.mask
        acc = 0
        for a in A.elements:
            b = bB & ~(1 << a) if restricted else bB
            acc |= _rotate(b, a, p, full)
        return ModSet(p, _decode(acc, 0))
    if not A.elements or not B.elements:
        return IntSet()
    if _span(A) > _BITSET_SPAN or _span(B) > _BITSET_SPAN:
        return _int_result(_loop_sums(A, B, restricted))
    loA, loB = A.elements[0], B.elements[0]
    bB = _bits_from(B.elements, loB)
    acc = 0
    for a in A.elements:
        b = bB
        if restricted and loB <= a <= B.elements[-1]:
            b &= ~(1 << (a - loB))
        acc |= b << (a - loA)
    return _int_result(_decode(acc, loA + loB))


def _loop_sums(A: AnySet, B: AnySet, restricted: bool) -> set[int]:
    return {a + b for a in A.elements for b in B.elements if not restricted or a != b}


def sumset(A, B, ctx: GroupContext | None = None) -> AnySet:
    """A + B = {a + b}, reduced mod p in Z/pZ.  Both operands must be nonempty."""
    A, B = coerce_pair(A, B, ctx)
    if not len(A) or not len(B):
        raise ValueError("sumset needs nonempty operands")
    return _sums(A, B, restricted=False)


def restricted_sumset(A, B, ctx: GroupContext | None = None) -> AnySet:
    """A +^ B = {a + b : a != b}; the disequality is tested on canonical residues."""
    A, B = coerce_pair(A, B, ctx)
    if not len(A) or not len(B):
        raise ValueError("restricted sumset needs nonempty operands")
    return _sums(A, B, restricted=True)


def restricted_sumset_naive(A, B, ctx: GroupContext | None = None) -> AnySet:
    """Reference double loop, kept independent of the bitmask path."""
    A, B = coerce_pair(A, B, ctx)
    out = []
    for a in A.elements:
        for b in B.elements:
            if a != b:
                out.append(a + b)
    if isinstance(A, ModSet):
        return ModSet.reduce(A.modulus, out)
    return _int_result(set(out))


def sumset_naive(A, B, ctx: GroupContext | None = None) -> AnySet:
    A, B = coerce_pair(A, B, ctx)
    out = [a + b for a in A.elements for b in B.elements]
    if isinstance(A, ModSet):
        return ModSet.reduce(A.modulus, out)
    return _int_result(set(out))


def cd_lower_bound(m: int, n: int, ctx: GroupContext = INTEGERS) -> int:
    """Cauchy-Davenport: min(p, m+n-1), or m+n-1 in Z."""
    if m < 1 or n < 1:
        raise ValueError("cardinalities must be at least 1")
    if isinstance(ctx, ModP):
        return min(ctx.p, m + n - 1)
    return m + n - 1


def eh_lower_bound(m: int, n: int, ctx: GroupContext = INTEGERS) -> int:
    """Erdos-Heilbronn: min(p, m+n-3), or max(0, m+n-3) in Z."""
    if m < 1 or n < 1:
        raise ValueError("cardinalities must be at least 1")
    if isinstance(ctx, ModP):
        return min(ctx.p, max(0, m + n - 3))
    return max(0, m + n - 3)


def is_critical_pair(A, B, ctx: GroupContext | None = None) -> bool:
    """True iff |A +^ B| = |A| + |B| - 3."""
    A, B = coerce_pair(A, B, ctx)
    if len(A) < 2 or len(B) < 2:
        raise ValueError("critical pairs need |A|, |B| >= 2")
    return len(restricted_sumset(A, B)) == len(A) + len(B) - 3
