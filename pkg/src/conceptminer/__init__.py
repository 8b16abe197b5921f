"""Association rule mining through optimal formal-concept coverages."""

from .concepts import (
    ConceptLattice,
    FormalConcept,
    enumerate_concepts,
    export_dot,
    infimum,
    is_concept,
    leq,
    supremum,
)
from .context import (
    FormalContext,
    ParseError,
    close_extent,
    close_intent,
    extent_of,
    intent_of,
    load,
    parse_csv,
    parse_cxt,
    parse_fimi,
    to_csv,
    to_cxt,
)
from .coverage import Coverage, Package, itemsets_of, partition_rows, sfc2a, validate_coverage
from .errors import ContractError, GuardError
from .optimal import (
    PseudoConcept,
    Relation,
    brute_optimal_concept,
    heuristic_optimal_concept,
    is_dense,
    pseudo_concept,
)
from .relevance import (
    PcfFormula,
    RelevanceConfig,
    concept_confidence,
    concept_relevance,
    pcf_relevance,
    pcf_size,
)
from .rules import (
    AssociationRule,
    MiningParams,
    apriori_frequent,
    apriori_rules,
    mine_sfc2a,
    rules_from_coverage,
    rules_from_itemset,
)

__version__ = "0.1.0"
