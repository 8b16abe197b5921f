"""Binary formal contexts, their parsers, and the two derivation operators.

Sets of objects and properties travel through the public API as frozensets of
indices.  Internally every row and column is also kept as an int bitmask, and
the ``*_mask`` methods expose the derivation operators on masks for the
hot loops of the miners.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from ._bits import full, members, popcount, to_mask

ObjectSet = FrozenSet[int]
PropertySet = FrozenSet[int]
Couple = Tuple[int, int]

FORMATS = ("fimi", "csv", "cxt")


class ParseError(ValueError):
    """Raised when dataset text cannot be turned into a context."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class FormalContext:
    """Objects, properties and the incidence relation between them.

    ``rows[o]`` is the bitmask of properties held by object ``o``.
    """

    object_labels: Tuple[str, ...]
    property_labels: Tuple[str, ...]
    rows: Tuple[int, ...]
    cols: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "object_labels", tuple(self.object_labels))
        object.__setattr__(self, "property_labels", tuple(self.property_labels))
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.rows) != len(self.object_labels):
            raise ValueError("one incidence row is required per object")
        if len(set(self.object_labels)) != len(self.object_labels):
            raise ValueError("object labels must be unique")
        if len(set(self.property_labels)) != len(self.property_labels):
            raise ValueError("property labels must be unique")
        limit = full(len(self.property_labels))
        cols = [0] * len(self.property_labels)
        for o, row in enumerate(self.rows):
            if row < 0 or row & ~limit:
                raise ValueError(f"row {o} references a property out of range")
            bit = 1 << o
            for p in members(row):
                cols[p] |= bit
        object.__setattr__(self, "cols", tuple(cols))

    @classmethod
    def from_incidence(
        cls,
        incidence: Iterable[Iterable[int]],
        object_labels: Optional[Sequence[str]] = None,
        property_labels: Optional[Sequence[str]] = None,
        n_properties: Optional[int] = None,
    ) -> "FormalContext":
        """Build a context from per-object collections of property indices."""
        rows = [to_mask(r) for r in incidence]
        if property_labels is None:
            if n_properties is None:
                n_properties = max((r.bit_length() for r in rows), default=0)
            property_labels = [f"p{i}" for i in range(n_properties)]
        if object_labels is None:
            object_labels = [f"o{i}" for i in range(len(rows))]
        return cls(tuple(object_labels), tuple(property_labels), tuple(rows))

    @property
    def n_objects(self) -> int:
        return len(self.object_labels)

    @property
    def n_properties(self) -> int:
        return len(self.property_labels)

    @property
    def all_objects(self) -> int:
        return full(self.n_objects)

    @property
    def all_properties(self) -> int:
        return full(self.n_properties)

    @property
    def incidence(self) -> Tuple[PropertySet, ...]:
        return tuple(frozenset(members(r)) for r in self.rows)

    @property
    def n_couples(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def has(self, o: int, p: int) -> bool:
        return bool(self.rows[o] >> p & 1)

    def couples(self) -> Iterator[Couple]:
        """Incident couples in row-major order."""
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

    def head(self, n: int) -> "FormalContext":
        """The sub-context of the first ``n`` objects, properties unchanged."""
        n = min(n, self.n_objects)
        return FormalContext(self.object_labels[:n], self.property_labels, self.rows[:n])

    def object_names(self, objects: Iterable[int]) -> List[str]:
        return [self.object_labels[o] for o in sorted(objects)]

    def property_names(self, properties: Iterable[int]) -> List[str]:
        return [self.property_labels[p] for p in sorted(properties)]


def _check_bounds(mask: int, size: int, what: str) -> None:
    if mask < 0 or mask >> size:
        raise ValueError(f"{what} index out of range")


def intent_of(ctx: FormalContext, objects: Iterable[int]) -> PropertySet:
    """Properties shared by every object in ``objects`` (all of them for the empty set)."""
    mask = to_mask(objects)
    _check_bounds(mask, ctx.n_objects, "object")
    return frozenset(members(ctx.intent_mask(mask)))


def extent_of(ctx: FormalContext, properties: Iterable[int]) -> ObjectSet:
    """Objects holding every property in ``properties`` (all of them for the empty set)."""
    mask = to_mask(properties)
    _check_bounds(mask, ctx.n_properties, "property")
    return frozenset(members(ctx.extent_mask(mask)))


def close_intent(ctx: FormalContext, properties: Iterable[int]) -> PropertySet:
    mask = to_mask(properties)
    _check_bounds(mask, ctx.n_properties, "property")
    return frozenset(members(ctx.intent_mask(ctx.extent_mask(mask))))


def close_extent(ctx: FormalContext, objects: Iterable[int]) -> ObjectSet:
    mask = to_mask(objects)
    _check_bounds(mask, ctx.n_objects, "object")
    return frozenset(members(ctx.extent_mask(ctx.intent_mask(mask))))


# -- parsers -----------------------------------------------------------------


def _data_lines(text: str, limit: Optional[int]) -> List[str]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if limit is not None:
        lines = lines[:limit]
    return lines


def parse_fimi(text: str, limit: Optional[int] = None) -> FormalContext:
    """Parse a FIMI ``.dat`` transaction file.

    Line ``k`` becomes object ``t<k>``; item id ``i`` becomes property
    ``i<i>``, with property indices assigned in ascending id order.  Blank
    lines before the last transaction are empty transactions.
    """
    transactions = []
    for lineno, line in enumerate(_data_lines(text, limit), start=1):
        items = set()
        for token in line.split():
            if not token.isdigit():
                raise ParseError(f"expected a non-negative integer item id, got {token!r}", lineno)
            items.add(int(token))
        transactions.append(items)
    ids = sorted(set().union(*transactions)) if transactions else []
    index = {item: i for i, item in enumerate(ids)}
    rows = [to_mask(index[i] for i in t) for t in transactions]
    return FormalContext(
        tuple(f"t{k}" for k in range(len(rows))),
        tuple(f"i{i}" for i in ids),
        tuple(rows),
    )


def parse_csv(text: str, limit: Optional[int] = None) -> FormalContext:
    """Parse a 0/1 cross table with a header of property labels.

    The delimiter is ``;`` when the header contains one, ``,`` otherwise.
    """
    lines = [(n, line) for n, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        return FormalContext((), (), ())
    header_no, header_line = lines[0]
    delimiter = ";" if ";" in header_line else ","
    header = next(csv.reader([header_line], delimiter=delimiter))
    props = [h.strip() for h in header[1:]]
    if len(set(props)) != len(props):
        raise ParseError("duplicate property label in header", header_no)
    body = lines[1:]
    if limit is not None:
        body = body[:limit]
    labels, rows = [], []
    for lineno, line in body:
        cells = [c.strip() for c in next(csv.reader([line], delimiter=delimiter))]
        if len(cells) != len(props) + 1:
            raise ParseError(f"expected {len(props) + 1} cells, found {len(cells)}", lineno)
        row = 0
        for p, cell in enumerate(cells[1:]):
            if cell == "1":
                row |= 1 << p
            elif cell != "0":
                raise ParseError(f"cell {cell!r} is not 0 or 1", lineno)
        labels.append(cells[0])
        rows.append(row)
    if len(set(labels)) != len(labels):
        raise ParseError("duplicate object label")
    return FormalContext(tuple(labels), tuple(props), tuple(rows))


def parse_cxt(text: str, limit: Optional[int] = None) -> FormalContext:
    """Parse a Burmeister ``.cxt`` context."""
    lines = text.splitlines()
    if len(lines) < 5 or lines[0].strip() != "B":
        raise ParseError("missing 'B' header", 1)
    try:
        n_obj = int(lines[2])
        n_prop = int(lines[3])
    except ValueError:
        raise ParseError("object and property counts must be integers", 3) from None
    if n_obj < 0 or n_prop < 0:
        raise ParseError("negative object or property count", 3)
    if lines[4].strip():
        raise ParseError("expected a blank line after the counts", 5)
    start = 5
    needed = start + 2 * n_obj + n_prop
    if len(lines) < needed:
        raise ParseError(f"truncated file: expected at least {needed} lines, found {len(lines)}")
    objects = lines[start:start + n_obj]
    props = lines[start + n_obj:start + n_obj + n_prop]
    rows = []
    first_row = start + n_obj + n_prop
    for k in range(n_obj):
        lineno = first_row + k + 1
        line = lines[first_row + k].rstrip()
        if len(line) != n_prop:
            raise ParseError(f"expected {n_prop} cross marks, found {len(line)}", lineno)
        row = 0
        for p, ch in enumerate(line):
            if ch in "Xx":
                row |= 1 << p
            elif ch != ".":
                raise ParseError(f"unexpected cell {ch!r}", lineno)
        rows.append(row)
    if any(line.strip() for line in lines[needed:]):
        raise ParseError("unexpected content after the incidence rows", needed + 1)
    try:
        ctx = FormalContext(tuple(objects), tuple(props), tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return ctx if limit is None else ctx.head(limit)


def to_cxt(ctx: FormalContext) -> str:
    out = ["B", "", str(ctx.n_objects), str(ctx.n_properties), ""]
    out.extend(ctx.object_labels)
    out.extend(ctx.property_labels)
    for row in ctx.rows:
        out.append("".join("X" if row >> p & 1 else "." for p in range(ctx.n_properties)))
    return "\n".join(out) + "\n"


def to_csv(ctx: FormalContext, delimiter: str = ";") -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([""] + list(ctx.property_labels))
    for label, row in zip(ctx.object_labels, ctx.rows):
        writer.writerow([label] + [int(row >> p & 1) for p in range(ctx.n_properties)])
    return buf.getvalue()


_PARSERS = {"fimi": parse_fimi, "csv": parse_csv, "cxt": parse_cxt}


def parse(text: str, fmt: str, limit: Optional[int] = None) -> FormalContext:
    try:
        parser = _PARSERS[fmt]
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}") from None
    return parser(text, limit=limit)


def load(path, fmt: Optional[str] = None, limit: Optional[int] = None) -> FormalContext:
    """Read a context from disk, guessing the format from the suffix if needed."""
    path = Path(path)
    if fmt is None:
        fmt = {".dat": "fimi", ".csv": "csv", ".cxt": "cxt"}.get(path.suffix.lower(), "fimi")
    return parse(path.read_text(), fmt, limit=limit)
