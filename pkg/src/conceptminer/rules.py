"""Association rules: expansion of itemsets, thresholds, and the Apriori baseline."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from ._bits import members, popcount, to_mask
from .context import FormalContext
from .coverage import Coverage, itemsets_of, sfc2a
from .errors import GuardError
from .relevance import DEFAULT_CONFIG, RelevanceConfig


@dataclass(frozen=True)
class AssociationRule:
    antecedent: FrozenSet[int]
    consequent: FrozenSet[int]
    support: float
    confidence: float

    @property
    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return (tuple(sorted(self.antecedent)), tuple(sorted(self.consequent)))

    def describe(self, ctx: FormalContext) -> str:
        ant = ",".join(ctx.property_names(self.antecedent))
        cons = ",".join(ctx.property_names(self.consequent))
        return f"{ant} -> {cons} (support {self.support:.6f}, confidence {self.confidence:.6f})"


@dataclass(frozen=True)
class MiningParams:
    min_sup: float
    min_conf: float
    max_intent_for_rule_expansion: int = 16

    def __post_init__(self):
        for name in ("min_sup", "min_conf"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.max_intent_for_rule_expansion < 2:
            raise ValueError("max_intent_for_rule_expansion must be at least 2")


def _sort_rules(rules: Iterable[AssociationRule]) -> List[AssociationRule]:
    unique = {r.key: r for r in rules}
    return sorted(unique.values(), key=lambda r: (-r.confidence, -r.support, r.key))


def _expand(
    itemset: int,
    n_objects: int,
    count_of: Callable[[int], int],
    params: MiningParams,
) -> List[AssociationRule]:
    size = popcount(itemset)
    if size < 2 or n_objects == 0:
        return []
    joint = count_of(itemset)
    if joint == 0 or joint / n_objects < params.min_sup:
        return []
    if size > params.max_intent_for_rule_expansion:
        raise GuardError(
            f"itemset of {size} items exceeds the rule expansion cap of "
            f"{params.max_intent_for_rule_expansion}"
        )
    support = float(Fraction(joint, n_objects))
    rules = []
    sub = (itemset - 1) & itemset
    while sub:
        confidence = Fraction(joint, count_of(sub))
        if float(confidence) >= params.min_conf:
            rules.append(
                AssociationRule(
                    frozenset(members(sub)),
                    frozenset(members(itemset & ~sub)),
                    support,
                    float(confidence),
                )
            )
        sub = (sub - 1) & itemset
    return rules


def rules_from_itemset(
    ctx: FormalContext, itemset: Iterable[int], params: MiningParams
) -> List[AssociationRule]:
    """Rules ``X -> itemset - X`` for every non-empty proper ``X`` passing both thresholds.

    Itemsets below ``min_sup`` yield nothing, whatever their size.  A frequent
    itemset larger than ``params.max_intent_for_rule_expansion`` raises
    :class:`GuardError`.
    """
    mask = to_mask(itemset)
    count = lambda m: popcount(ctx.extent_mask(m))  # noqa: E731
    return _sort_rules(_expand(mask, ctx.n_objects, count, params))


def rules_from_coverage(cov: Coverage, params: MiningParams) -> List[AssociationRule]:
    ctx = cov.context
    cache: Dict[int, int] = {}

    def count(m: int) -> int:
        if m not in cache:
            cache[m] = popcount(ctx.extent_mask(m))
        return cache[m]

    rules: List[AssociationRule] = []
    for intent in itemsets_of(cov):
        rules.extend(_expand(to_mask(intent), ctx.n_objects, count, params))
    return _sort_rules(rules)


def mine_sfc2a(
    ctx: FormalContext, params: MiningParams, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> List[AssociationRule]:
    return rules_from_coverage(sfc2a(ctx, cfg), params)


def _frequent_counts(ctx: FormalContext, min_sup: float) -> Dict[Tuple[int, ...], Tuple[int, int]]:
    """Levelwise search; maps each frequent itemset to ``(count, extent mask)``."""
    n = ctx.n_objects
    if n == 0:
        return {}

    def frequent(count: int) -> bool:
        return count > 0 and count / n >= min_sup

    level = {}
    for p, col in enumerate(ctx.cols):
        c = popcount(col)
        if frequent(c):
            level[(p,)] = (c, col)
    result = dict(level)
    while level:
        by_prefix = defaultdict(list)
        for itemset in sorted(level):
            by_prefix[itemset[:-1]].append(itemset)
        next_level = {}
        for group in by_prefix.values():
            for i, a in enumerate(group):
                extent_a = level[a][1]
                for b in group[i + 1:]:
                    candidate = a + (b[-1],)
                    if any(
                        candidate[:k] + candidate[k + 1:] not in level
                        for k in range(len(candidate) - 2)
                    ):
                        continue
                    extent = extent_a & ctx.cols[b[-1]]
                    c = popcount(extent)
                    if frequent(c):
                        next_level[candidate] = (c, extent)
        result.update(next_level)
        level = next_level
    return result


def apriori_frequent(ctx: FormalContext, min_sup: float) -> Dict[FrozenSet[int], float]:
    """Every itemset with non-empty extent and relative support of at least ``min_sup``."""
    n = ctx.n_objects
    return {
        frozenset(items): float(Fraction(count, n))
        for items, (count, _) in _frequent_counts(ctx, min_sup).items()
    }


def apriori_rules(ctx: FormalContext, params: MiningParams) -> List[AssociationRule]:
    counts = {to_mask(items): count for items, (count, _) in _frequent_counts(ctx, params.min_sup).items()}
    rules: List[AssociationRule] = []
    for mask in counts:
        rules.extend(_expand(mask, ctx.n_objects, counts.__getitem__, params))
    return _sort_rules(rules)


TSV_HEADER = "antecedent\tconsequent\tsupport\tconfidence\talgorithm"


def format_rules_tsv(
    ctx: FormalContext, rules: Iterable[AssociationRule], algorithm: str,
    header: Optional[str] = TSV_HEADER,
) -> str:
    lines = [header] if header else []
    for r in rules:
        lines.append(
            "\t".join(
                [
                    ",".join(ctx.property_names(r.antecedent)),
                    ",".join(ctx.property_names(r.consequent)),
                    f"{r.support:.6f}",
                    f"{r.confidence:.6f}",
                    algorithm,
                ]
            )
        )
    return "\n".join(lines) + "\n"
