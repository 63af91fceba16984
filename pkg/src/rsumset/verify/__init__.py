"""Exhaustive enumeration of pairs and theorem-by-theorem agreement checks."""
from .checkpoint import Checkpoint
from .spec import SELECTORS, SweepSpec, pair_count
from .sweep import SweepInterrupted, VerifyReport, run_theorem_sweep, search_counterexamples
from .universe import Universe, build_universe, enumerate_pairs

__all__ = [
    "Checkpoint", "SELECTORS", "SweepSpec", "pair_count", "SweepInterrupted",
    "VerifyReport", "run_theorem_sweep", "search_counterexamples", "Universe", "build_universe", "enumerate_pairs",
]
