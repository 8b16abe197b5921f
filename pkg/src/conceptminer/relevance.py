"""Quality measures for concepts and pseudo-concepts.

Every score is computed exactly as a :class:`fractions.Fraction` so that ties
are detected without rounding error; the public functions return floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Iterable, Optional, Tuple, TypeVar

from ._bits import members, popcount
from .concepts import FormalConcept, is_concept
from .context import FormalContext
from .errors import ContractError

if TYPE_CHECKING:
    from .optimal import PseudoConcept


class PcfFormula(str, enum.Enum):
    #: size / (length + width) * ((length + width) - size)
    DEF10 = "def10"
    #: size / (length + conf) * ((length + width) - size)
    DEF10_CONF = "def10conf"


@dataclass(frozen=True)
class RelevanceConfig:
    pcf_formula: PcfFormula = PcfFormula.DEF10
    single_item_conf: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "pcf_formula", PcfFormula(self.pcf_formula))
        if not 0.0 <= self.single_item_conf <= 1.0:
            raise ValueError("single_item_conf must lie in [0, 1]")


DEFAULT_CONFIG = RelevanceConfig()


def max_confidence(universe, intent: int, single_item_conf: float = 0.0) -> Fraction:
    """Best confidence of a rule ``X -> intent - X`` with ``X`` a proper subset.

    Shrinking ``X`` can only grow its extent, so the maximum is reached at a
    co-atom ``intent - {b}``; prefix and suffix intersections of the columns
    give every co-atom extent in linear time.
    """
    items = members(intent)
    if len(items) < 2:
        return Fraction(single_item_conf)
    cols = [universe.cols[b] for b in items]
    everything = universe.all_objects
    prefix = [everything]
    for c in cols:
        prefix.append(prefix[-1] & c)
    suffix = everything
    smallest = None
    for k in range(len(cols) - 1, -1, -1):
        n = popcount(prefix[k] & suffix)
        if smallest is None or n < smallest:
            smallest = n
        suffix &= cols[k]
    support = popcount(prefix[-1])
    if smallest == 0:
        return Fraction(0)
    return Fraction(support, smallest)


def _require_concept(ctx: FormalContext, concept: FormalConcept) -> None:
    if not is_concept(ctx, concept.extent, concept.intent):
        raise ContractError("argument is not a formal concept of the context")


def concept_confidence_exact(
    ctx: FormalContext, concept: FormalConcept, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> Fraction:
    _require_concept(ctx, concept)
    return max_confidence(ctx, concept.intent_mask, cfg.single_item_conf)


def concept_confidence(
    ctx: FormalContext, concept: FormalConcept, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> float:
    """Maximum confidence over the rules generated from the concept's intent.

    A one-item intent generates no rule and scores ``cfg.single_item_conf``.
    """
    return float(concept_confidence_exact(ctx, concept, cfg))


def concept_relevance_exact(
    ctx: FormalContext, concept: FormalConcept, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> Fraction:
    conf = concept_confidence_exact(ctx, concept, cfg)
    return (concept.length + conf) * (concept.length + concept.width)


def concept_relevance(
    ctx: FormalContext, concept: FormalConcept, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> float:
    """``(length + conf) * (length + width)``."""
    return float(concept_relevance_exact(ctx, concept, cfg))


def rectangle_size(universe, rows: int, cols: int) -> int:
    """Number of incident couples of ``universe`` inside ``rows x cols``."""
    return sum(popcount(universe.cols[c] & rows) for c in members(cols))


def pcf_size(pcf: "PseudoConcept") -> int:
    return rectangle_size(pcf.universe, pcf.rows_mask, pcf.cols_mask)


def rectangle_score(
    universe, rows: int, cols: int, cfg: RelevanceConfig = DEFAULT_CONFIG,
    size: Optional[int] = None,
) -> Fraction:
    if size is None:
        size = rectangle_size(universe, rows, cols)
    length, width = popcount(cols), popcount(rows)
    spread = length + width
    if cfg.pcf_formula is PcfFormula.DEF10:
        return Fraction(size, spread) * (spread - size)
    conf = max_confidence(universe, cols, cfg.single_item_conf)
    return Fraction(size) / (length + conf) * (spread - size)


def pcf_relevance_exact(pcf: "PseudoConcept", cfg: RelevanceConfig = DEFAULT_CONFIG) -> Fraction:
    return rectangle_score(pcf.universe, pcf.rows_mask, pcf.cols_mask, cfg)


def pcf_relevance(pcf: "PseudoConcept", cfg: RelevanceConfig = DEFAULT_CONFIG) -> float:
    return float(pcf_relevance_exact(pcf, cfg))


T = TypeVar("T")


def pick_best(
    candidates: Iterable[T],
    score: Callable[[T], Fraction],
    rectangle: Callable[[T], Tuple[int, int]],
) -> T:
    """Highest-scoring candidate.

    Equal scores go to the smaller sorted intent, then the smaller sorted
    extent; ``rectangle`` maps a candidate to its ``(extent, intent)`` masks.
    """
    best_score = None
    tied = []
    for cand in candidates:
        s = score(cand)
        if best_score is None or s > best_score:
            best_score, tied = s, [cand]
        elif s == best_score:
            tied.append(cand)
    if not tied:
        raise ValueError("no candidates to choose from")
    if len(tied) == 1:
        return tied[0]

    def tie_key(cand):
        ext, inte = rectangle(cand)
        return (members(inte), members(ext))

    return min(tied, key=tie_key)
