"""Formal concepts, exhaustive lattice enumeration and the lattice order."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Tuple

from ._bits import is_subset, members, to_mask
from .context import FormalContext
from .errors import GuardError

DEFAULT_MAX_PROPERTIES = 24


@dataclass(frozen=True)
class FormalConcept:
    extent: FrozenSet[int]
    intent: FrozenSet[int]
    extent_mask: int = field(init=False, repr=False, compare=False)
    intent_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "extent", frozenset(self.extent))
        object.__setattr__(self, "intent", frozenset(self.intent))
        object.__setattr__(self, "extent_mask", to_mask(self.extent))
        object.__setattr__(self, "intent_mask", to_mask(self.intent))

    @classmethod
    def from_masks(cls, extent: int, intent: int) -> "FormalConcept":
        return cls(frozenset(members(extent)), frozenset(members(intent)))

    @property
    def width(self) -> int:
        return len(self.extent)

    @property
    def length(self) -> int:
        return len(self.intent)

    def sort_key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Lexicographic by sorted intent, then by sorted extent."""
        return (members(self.intent_mask), members(self.extent_mask))

    def contains(self, o: int, p: int) -> bool:
        return o in self.extent and p in self.intent

    def within(self, other: "FormalConcept") -> bool:
        """True when this rectangle lies inside ``other``'s rectangle."""
        return is_subset(self.extent_mask, other.extent_mask) and is_subset(
            self.intent_mask, other.intent_mask
        )

    def describe(self, ctx: FormalContext) -> str:
        objs = ",".join(ctx.object_names(self.extent))
        props = ",".join(ctx.property_names(self.intent))
        return f"{{{objs}}} | {{{props}}}"


@dataclass(frozen=True)
class ConceptLattice:
    context: FormalContext
    concepts: Tuple[FormalConcept, ...]

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self) -> Iterator[FormalConcept]:
        return iter(self.concepts)

    def __contains__(self, concept) -> bool:
        return concept in set(self.concepts)

    @property
    def top(self) -> FormalConcept:
        return max(self.concepts, key=lambda c: c.width)

    @property
    def bottom(self) -> FormalConcept:
        return max(self.concepts, key=lambda c: c.length)

    def hasse_edges(self) -> List[Tuple[int, int]]:
        """Cover pairs ``(lower, upper)`` as indices into ``concepts``."""
        cs = self.concepts
        above = [
            [j for j, d in enumerate(cs) if j != i and leq(c, d)] for i, c in enumerate(cs)
        ]
        edges = []
        for i, ups in enumerate(above):
            for j in ups:
                # j covers i unless some other upper bound of i sits strictly below j
                if not any(k != j and leq(cs[k], cs[j]) for k in ups):
                    edges.append((i, j))
        return edges


def is_concept(ctx: FormalContext, extent: Iterable[int], intent: Iterable[int]) -> bool:
    a, b = to_mask(extent), to_mask(intent)
    if a >> ctx.n_objects or b >> ctx.n_properties:
        return False
    return ctx.intent_mask(a) == b and ctx.extent_mask(b) == a


def _next_closure_intents(ctx: FormalContext) -> Iterator[int]:
    n = ctx.n_properties

    def close(b: int) -> int:
        return ctx.intent_mask(ctx.extent_mask(b))

    current = close(0)
    yield current
    while True:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                continue
            below = bit - 1
            candidate = close((current & below) | bit)
            if candidate & below == current & below:
                current = candidate
                yield current
                break
        else:
            return


def enumerate_concepts(
    ctx: FormalContext, max_properties: int = DEFAULT_MAX_PROPERTIES
) -> ConceptLattice:
    """All formal concepts of ``ctx``, ordered lexicographically by intent.

    Intents are generated with Ganter's NextClosure.  Contexts with more than
    ``max_properties`` properties are refused because the lattice can be
    exponential in that number.
    """
    if ctx.n_properties > max_properties:
        raise GuardError(
            f"context has {ctx.n_properties} properties, over the enumeration limit "
            f"of {max_properties}"
        )
    concepts = [
        FormalConcept.from_masks(ctx.extent_mask(b), b) for b in _next_closure_intents(ctx)
    ]
    concepts.sort(key=FormalConcept.sort_key)
    return ConceptLattice(ctx, tuple(concepts))


def leq(c1: FormalConcept, c2: FormalConcept) -> bool:
    """Subconcept order: ``c1``'s extent is contained in ``c2``'s."""
    return is_subset(c1.extent_mask, c2.extent_mask)


def supremum(ctx: FormalContext, concepts: Iterable[FormalConcept]) -> FormalConcept:
    intent = ctx.all_properties
    for c in concepts:
        intent &= c.intent_mask
    return FormalConcept.from_masks(ctx.extent_mask(intent), intent)


def infimum(ctx: FormalContext, concepts: Iterable[FormalConcept]) -> FormalConcept:
    extent = ctx.all_objects
    for c in concepts:
        extent &= c.extent_mask
    return FormalConcept.from_masks(extent, ctx.intent_mask(extent))


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(lattice: ConceptLattice) -> str:
    """Hasse diagram in Graphviz DOT; nodes ``c<k>`` follow lattice order."""
    ctx = lattice.context
    lines = ["digraph lattice {", "  rankdir=BT;", "  node [shape=box];"]
    for k, c in enumerate(lattice.concepts):
        objs = ",".join(ctx.object_names(c.extent))
        props = ",".join(ctx.property_names(c.intent))
        label = _dot_escape(f"{{{objs}}}\n{{{props}}}").replace("\n", "\\n")
        lines.append(f'  c{k} [label="{label}"];')
    for lower, upper in lattice.hasse_edges():
        lines.append(f"  c{lower} -> c{upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "DEFAULT_MAX_PROPERTIES",
    "ConceptLattice",
    "FormalConcept",
    "enumerate_concepts",
    "export_dot",
    "infimum",
    "is_concept",
    "leq",
    "supremum",
]
