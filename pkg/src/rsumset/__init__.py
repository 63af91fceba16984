"""Restricted sumsets in Z and Z/pZ, critical pairs and their structure."""
from .classify import (
    APWitness,
    BiPairWitness,
    CaseTag,
    PairClassification,
    detect_ap,
    detect_bi_pair,
    is_standard_pair,
    predict_critical,
)
from .errors import BudgetExceeded, CheckpointError, HypothesisViolation, ModulusMismatch
from .gaps import GapProfile, check_gap_theorem, exponent_profile, longest_gap_over_generators, mod_inverse
from .sets import (
    INTEGERS,
    IntSet,
    Integers,
    ModP,
    ModSet,
    cd_lower_bound,
    eh_lower_bound,
    is_critical_pair,
    parse_set,
    restricted_sumset,
    restricted_sumset_naive,
    sumset,
)

__version__ = "0.1.0"
