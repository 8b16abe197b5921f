"""Pseudo-concepts and the search for an optimal concept around one couple.

A *universe* is anything exposing ``rows``, ``cols``, ``all_objects``,
``all_properties``, ``intent_mask`` and ``extent_mask``: a full
:class:`~conceptminer.context.FormalContext` or a growing :class:`Relation`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Tuple

from ._bits import full, members, popcount
from .concepts import DEFAULT_MAX_PROPERTIES, FormalConcept, enumerate_concepts
from .context import FormalContext
from .errors import ContractError
from .relevance import (
    DEFAULT_CONFIG,
    RelevanceConfig,
    concept_relevance_exact,
    pick_best,
    rectangle_score,
)


class Relation:
    """A mutable sub-relation of a context, stored as row and column masks."""

    def __init__(self, n_objects: int, n_properties: int):
        self.n_objects = n_objects
        self.n_properties = n_properties
        self.rows: List[int] = [0] * n_objects
        self.cols: List[int] = [0] * n_properties

    @classmethod
    def of(cls, ctx: FormalContext, couples: Iterable[Tuple[int, int]] = ()) -> "Relation":
        rel = cls(ctx.n_objects, ctx.n_properties)
        for o, p in couples:
            rel.add(o, 1 << p)
        return rel

    @property
    def all_objects(self) -> int:
        return full(self.n_objects)

    @property
    def all_properties(self) -> int:
        return full(self.n_properties)

    def add(self, o: int, properties: int) -> None:
        self.rows[o] |= properties
        bit = 1 << o
        for p in members(properties):
            self.cols[p] |= bit

    def has(self, o: int, p: int) -> bool:
        return bool(self.rows[o] >> p & 1)

    def couples(self):
        for o, row in enumerate(self.rows):
            for p in members(row):
                yield (o, p)

    def intent_mask(self, objects: int) -> int:
        result = self.all_properties
        while objects and result:
            low = objects & -objects
            result &= self.rows[low.bit_length() - 1]
            objects ^= low
        return result

    def extent_mask(self, properties: int) -> int:
        result = self.all_objects
        while properties and result:
            low = properties & -properties
            result &= self.cols[low.bit_length() - 1]
            properties ^= low
        return result


@dataclass(frozen=True, eq=False)
class PseudoConcept:
    """A rectangle ``rows x cols`` around an anchor couple of a universe."""

    rows_mask: int
    cols_mask: int
    anchor: Tuple[int, int]
    universe: object

    @property
    def rows(self) -> FrozenSet[int]:
        return frozenset(members(self.rows_mask))

    @property
    def cols(self) -> FrozenSet[int]:
        return frozenset(members(self.cols_mask))

    @property
    def width(self) -> int:
        return popcount(self.rows_mask)

    @property
    def length(self) -> int:
        return popcount(self.cols_mask)


def _require_incident(universe, o: int, p: int) -> None:
    if not (0 <= o < len(universe.rows) and 0 <= p < len(universe.cols)):
        raise ContractError(f"couple ({o}, {p}) is out of range")
    if not universe.rows[o] >> p & 1:
        raise ContractError(f"couple ({o}, {p}) is not incident")


def pseudo_concept(universe, o: int, p: int) -> PseudoConcept:
    """The rectangle of objects having ``p`` by properties of ``o``."""
    _require_incident(universe, o, p)
    return PseudoConcept(universe.cols[p], universe.rows[o], (o, p), universe)


def _missing_rows(universe, rows: int, cols: int) -> int:
    """Rows of the rectangle that lack at least one of its columns."""
    missing = 0
    for c in members(cols):
        missing |= rows & ~universe.cols[c]
    return missing


def is_dense(pcf: PseudoConcept) -> bool:
    return not _missing_rows(pcf.universe, pcf.rows_mask, pcf.cols_mask)


def _shrink_candidates(universe, rows: int, cols: int):
    """Sub-rectangles around the anchor with their sizes, current one excluded.

    For ``x`` in ``rows`` the candidate keeps ``rows`` and narrows ``cols``
    to what ``x`` holds; for ``y`` in ``cols`` it keeps ``cols`` and narrows
    ``rows`` to the objects having ``y``.  Only rows with a zero can narrow
    the columns, and only columns with a zero can narrow the rows.
    """
    col_counts = {c: popcount(universe.cols[c] & rows) for c in members(cols)}
    width = popcount(rows)
    seen = set()
    out = []
    for x in members(_missing_rows(universe, rows, cols)):
        narrowed = universe.rows[x] & cols
        if narrowed not in seen:
            seen.add(narrowed)
            size = sum(col_counts[c] for c in members(narrowed))
            out.append((rows, narrowed, size))
    for y, count in col_counts.items():
        if count == width:
            continue
        narrowed = universe.cols[y] & rows
        size = sum(popcount(universe.cols[c] & narrowed) for c in col_counts)
        out.append((narrowed, cols, size))
    return out


def heuristic_optimal_concept(
    universe, o: int, p: int, cfg: RelevanceConfig = DEFAULT_CONFIG
) -> FormalConcept:
    """Shrink the pseudo-concept of ``(o, p)`` until it is dense, then close it.

    Each round scores every one-step sub-rectangle around the anchor with the
    pseudo-concept relevance and keeps the best.  The closure is taken in
    ``universe``.
    """
    start = pseudo_concept(universe, o, p)
    rows, cols = start.rows_mask, start.cols_mask
    while True:
        candidates = _shrink_candidates(universe, rows, cols)
        if not candidates:
            break
        rows, cols, _ = pick_best(
            candidates,
            lambda c: rectangle_score(universe, c[0], c[1], cfg, size=c[2]),
            lambda c: (c[0], c[1]),
        )
    extent = universe.extent_mask(cols)
    return FormalConcept.from_masks(extent, universe.intent_mask(extent))


def brute_optimal_concept(
    ctx: FormalContext,
    o: int,
    p: int,
    cfg: RelevanceConfig = DEFAULT_CONFIG,
    max_properties: int = DEFAULT_MAX_PROPERTIES,
) -> FormalConcept:
    """The concept containing ``(o, p)`` with the highest concept relevance, by enumeration."""
    _require_incident(ctx, o, p)
    lattice = enumerate_concepts(ctx, max_properties=max_properties)
    return pick_best(
        (c for c in lattice if c.contains(o, p)),
        lambda c: concept_relevance_exact(ctx, c, cfg),
        lambda c: (c.extent_mask, c.intent_mask),
    )
