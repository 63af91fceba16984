"""Sweep specification, validation, closed-form pair counts and the budget gate."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from math import comb
from typing import Optional

from ..errors import BudgetExceeded
from ..sets import is_prime

SELECTORS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "KAROLYI", "LEMMAS")
MOD_ONLY = ("T5", "T6", "T7", "KAROLYI")
GAP_MODES = ("linear", "cyclic", "both")

MAX_WINDOW = 16
MAX_FULL_PRIME = 13
MAX_PRIME = 23
DEFAULT_BUDGET = 50_000_000
FORMAT_VERSION = 1

# fields that change timing or I/O but never results
_UNHASHED = ("workers", "checkpoint")


@dataclass(frozen=True)
class SweepSpec:
    theorem: str
    window: Optional[int] = None
    prime: Optional[int] = None
    min_size: int = 2
    max_size: Optional[int] = None
    normalize: bool = True
    gap_mode: str = "both"
    search: bool = False
    relax: bool = False
    band_only: bool = False
    cap: int = 100
    budget: int = DEFAULT_BUDGET
    chunk_pairs: int = 50_000
    workers: int = field(default=1, compare=False)
    checkpoint: Optional[str] = field(default=None, compare=False)

    @property
    def is_mod(self) -> bool:
        return self.prime is not None

    @property
    def width(self) -> int:
        return self.prime if self.is_mod else self.window

    @property
    def upper_size(self) -> int:
        return self.width if self.max_size is None else min(self.max_size, self.width)

    def effective(self) -> "SweepSpec":
        """Resolve settings that a selector overrides.

        The T5 hypothesis a_m + b_n < p is not translation invariant, so
        T5 always enumerates raw pairs.
        """
        if self.theorem == "T5" and self.normalize:
            return replace(self, normalize=False)
        return self

    def validate(self) -> "SweepSpec":
        """Check the spec and return its effective form.  Raises ValueError."""
        if self.theorem not in SELECTORS:
            raise ValueError(f"unknown theorem selector {self.theorem!r}; choose from {', '.join(SELECTORS)}")
        if (self.window is None) == (self.prime is None):
            raise ValueError("give exactly one of a Z window or a prime modulus")
        if self.window is not None and not 1 <= self.window <= MAX_WINDOW:
            raise ValueError(f"window must be in 1..{MAX_WINDOW}")
        if self.prime is not None:
            if not is_prime(self.prime):
                raise ValueError(f"modulus {self.prime} is not prime")
            if self.prime > MAX_PRIME:
                raise ValueError(f"primes above {MAX_PRIME} are not swept")
        if self.min_size < 1 or (self.max_size is not None and self.max_size < self.min_size):
            raise ValueError("bad size filter")
        if self.theorem != "LEMMAS" and self.min_size < 2:
            raise ValueError("criticality needs |A|, |B| >= 2; use --min-size 2 or more")
        if self.gap_mode not in GAP_MODES:
            raise ValueError(f"gap mode must be one of {GAP_MODES}")
        if self.workers < 1 or self.cap < 0 or self.chunk_pairs < 1:
            raise ValueError("workers and chunk size must be positive, cap nonnegative")

        estimate = pair_count(self.effective(), normalized=True)
        if estimate > self.budget:
            raise BudgetExceeded(estimate, self.budget)

        if self.is_mod and self.prime > MAX_FULL_PRIME and self.max_size is None:
            raise ValueError(f"primes above {MAX_FULL_PRIME} need a --max-size filter")
        if not self.is_mod and self.theorem in MOD_ONLY:
            raise ValueError(f"{self.theorem} is a statement about Z/pZ; pass --mod")
        if (self.relax or self.band_only) and not self.is_mod:
            raise ValueError("--relax and --band-only only apply to Z/pZ sweeps")
        if self.relax and not self.search:
            raise ValueError("--relax drops a proven hypothesis and is only allowed in search mode")
        return self.effective()

    def echo(self) -> dict:
        d = asdict(self.effective())
        for k in _UNHASHED:
            d.pop(k)
        return d

    def spec_hash(self) -> str:
        blob = json.dumps({"v": FORMAT_VERSION, **self.echo()}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def admissible_subsets(width: int, lo: int, hi: int) -> int:
    """Number of subsets of a width-element universe with size in [lo, hi]."""
    return sum(comb(width, k) for k in range(lo, min(hi, width) + 1))


def _unordered(s: int) -> int:
    return s * (s + 1) // 2


def pair_count(spec: SweepSpec, normalized: bool) -> int:
    """Closed-form size of the pair stream.

    Raw: unordered pairs {A, B} (A = B allowed) of admissible subsets.
    Normalized Z: pairs with min(A u B) = 0, i.e. all pairs minus those
    avoiding 0.  Normalized Z/pZ: orbits under joint translation, counted
    with Burnside; only {full, full} is fixed by a nonzero shift.
    """
    w, lo, hi = spec.width, spec.min_size, spec.upper_size
    s = admissible_subsets(w, lo, hi)
    raw = _unordered(s)
    if not normalized or not spec.normalize:
        return raw
    if not spec.is_mod:
        return raw - _unordered(admissible_subsets(w - 1, lo, hi))
    p = spec.prime
    fixed = 1 if lo <= p <= hi else 0
    return (raw + (p - 1) * fixed) // p
