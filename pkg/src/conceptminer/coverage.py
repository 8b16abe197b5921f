"""Incremental optimal coverage of a context by formal concepts (SFC2A)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from ._bits import members
from .concepts import FormalConcept, is_concept
from .context import Couple, FormalContext
from .optimal import Relation, heuristic_optimal_concept, pseudo_concept
from .relevance import DEFAULT_CONFIG, RelevanceConfig, pcf_relevance_exact


@dataclass(frozen=True)
class Package:
    obj: int
    couples: Tuple[Couple, ...]

    @property
    def mask(self) -> int:
        m = 0
        for _, p in self.couples:
            m |= 1 << p
        return m


@dataclass(frozen=True)
class Coverage:
    context: FormalContext
    members: Tuple[FormalConcept, ...]
    selections: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[FormalConcept]:
        return iter(self.members)

    def serialize(self) -> str:
        """One ``{objects} | {properties}`` line per member, in lattice sort order."""
        ordered = sorted(self.members, key=FormalConcept.sort_key)
        return "".join(m.describe(self.context) + "\n" for m in ordered)


def partition_rows(ctx: FormalContext) -> List[Package]:
    return [
        Package(o, tuple((o, p) for p in members(row)))
        for o, row in enumerate(ctx.rows)
        if row
    ]


def _finalize(ctx: FormalContext, found: List[FormalConcept]) -> Tuple[FormalConcept, ...]:
    closed = set()
    for m in found:
        extent = ctx.extent_mask(m.intent_mask)
        closed.add(FormalConcept.from_masks(extent, ctx.intent_mask(extent)))
    kept = [m for m in closed if not any(m != other and m.within(other) for other in closed)]
    return tuple(sorted(kept, key=FormalConcept.sort_key))


def sfc2a(
    ctx: FormalContext,
    cfg: RelevanceConfig = DEFAULT_CONFIG,
    on_package: Optional[Callable[[Package, Relation, List[FormalConcept]], None]] = None,
) -> Coverage:
    """Cover every couple of ``ctx`` with formal concepts, one row package at a time.

    Package ``i`` is the row of the i-th non-empty object.  Its couples are
    searched inside the relation built so far plus the package itself, ordered
    by the relevance of their pseudo-concepts; each search replaces the
    members its result absorbs.  Members found in partial relations are
    re-closed against the full context at the end.

    ``on_package`` is called after each package with the package, the
    relation covered so far and the current members.
    """
    universe = Relation(ctx.n_objects, ctx.n_properties)
    cover: List[FormalConcept] = []
    selections = 0
    for package in partition_rows(ctx):
        # the couples of the current cover are exactly the rows added so far
        universe.add(package.obj, package.mask)
        pending = sorted(
            package.couples,
            key=lambda c: (-pcf_relevance_exact(pseudo_concept(universe, *c), cfg), c[1], c[0]),
        )
        while pending:
            a, b = pending[0]
            selections += 1
            found = heuristic_optimal_concept(universe, a, b, cfg)
            cover = [m for m in cover if not m.within(found)]
            cover.append(found)
            pending = [c for c in pending if not found.contains(*c)]
        if on_package is not None:
            on_package(package, universe, list(cover))
    return Coverage(ctx, _finalize(ctx, cover), selections)


@dataclass
class CoverageReport:
    uncovered: List[Couple]
    non_concepts: List[int]
    subsumed: List[Tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not (self.uncovered or self.non_concepts or self.subsumed)

    def lines(self, ctx: FormalContext) -> List[str]:
        out = [f"uncovered ({ctx.object_labels[o]}, {ctx.property_labels[p]})" for o, p in self.uncovered]
        out += [f"member {i} is not a formal concept" for i in self.non_concepts]
        out += [f"member {i} lies inside member {j}" for i, j in self.subsumed]
        return out


def validate_coverage(ctx: FormalContext, cov) -> CoverageReport:
    """Check completeness, closedness and irredundancy of a set of concepts.

    ``cov`` may be a :class:`Coverage` or any iterable of concepts.
    """
    found = list(cov)
    covered = [0] * ctx.n_objects
    for m in found:
        for o in members(m.extent_mask):
            if o < ctx.n_objects:
                covered[o] |= m.intent_mask
    uncovered = [
        (o, p) for o, row in enumerate(ctx.rows) for p in members(row & ~covered[o])
    ]
    non_concepts = [i for i, m in enumerate(found) if not is_concept(ctx, m.extent, m.intent)]
    subsumed = [
        (i, j)
        for i, a in enumerate(found)
        for j, b in enumerate(found)
        if i != j and a.within(b)
    ]
    return CoverageReport(uncovered, non_concepts, subsumed)


def itemsets_of(cov: Coverage) -> Dict[FrozenSet[int], float]:
    """Distinct member intents with their relative support."""
    n = cov.context.n_objects
    out: Dict[FrozenSet[int], float] = {}
    for m in cov.members:
        if m.intent not in out:
            out[m.intent] = float(Fraction(m.width, n)) if n else 0.0
    return out
