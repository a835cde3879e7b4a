"""Granular association rules between two universes joined by a many-to-many relation."""
from .exceptions import DataError, GranularError, ParameterError, StructuralError, ValidationError
from .granules import GranuleEnumerator, GranuleSet, enumerate_granules, join_candidates
from .measures import (
    GranularRule,
    MeasureSet,
    Subtype,
    is_complete_match,
    left_partial_confidence,
    measure_set,
    right_partial_confidence,
    select_checker,
    source_confidence,
    source_coverage,
    support,
    target_confidence,
    target_coverage,
)
from .miner import (
    FailureCache,
    GranularRuleMiner,
    MiningConfig,
    OpCounter,
    RuleSet,
    check_pair,
    inverse_lower_approximation,
    lower_approximation,
    mine,
    mine_backward,
    mine_forward,
    mine_sandwich,
    prune_complete,
)
from .model import (
    BinaryRelation,
    Descriptor,
    Granule,
    InformationSystem,
    Mmer,
    check_mmer,
    extension,
    inverse_neighborhood,
    make_granule,
    neighborhood,
    validate_mmer,
)

__version__ = "0.1.0"
