"""Core dataset model: attribute schemas, immutable instance tables, and
the index-based column removal filter.

Cell representation: a nominal cell is a 0-based ``int`` index into its
attribute's declared value list, a numeric cell is a ``float``, and a
missing cell is ``None``. The owning attribute's kind decides the
interpretation; the model validates cells against it on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from ..errors import DataError, UsageError

CellValue = Union[int, float, None]


@dataclass(frozen=True)
class AttributeSpec:
    """Schema of one column: a name plus either a declared nominal value
    list (order defines the nominal indices) or numeric kind.

    ``values is None`` means numeric.
    """

    name: str
    values: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.values is not None:
            values = tuple(self.values)
            if not values:
                raise UsageError(f"attribute {self.name!r}: empty nominal value list")
            if len(set(values)) != len(values):
                raise UsageError(f"attribute {self.name!r}: duplicate nominal values")
            object.__setattr__(self, "values", values)

    @property
    def is_nominal(self) -> bool:
        return self.values is not None

    @property
    def is_numeric(self) -> bool:
        return self.values is None

    def index_of(self, value: str) -> int | None:
        """Index of a declared value, or None when undeclared."""
        if self.values is None:
            raise UsageError(f"attribute {self.name!r} is numeric, not nominal")
        try:
            return self.values.index(value)
        except ValueError:
            return None


@dataclass(frozen=True)
class RawTable:
    """Untyped CSV contents: a header plus text rows of equal width."""

    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "header", tuple(self.header))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        width = len(self.header)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise DataError(
                    f"row {i + 1}: expected {width} cells, found {len(row)}"
                )

    def column_index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise DataError(f"missing required column {name!r}") from None

    def column(self, name: str) -> tuple[str, ...]:
        idx = self.column_index(name)
        return tuple(row[idx] for row in self.rows)


@dataclass(frozen=True)
class Dataset:
    """An immutable relation: ordered attribute schema, instance rows, and
    an optional designated target attribute (must be nominal).
    """

    relation: str
    attributes: tuple[AttributeSpec, ...]
    instances: tuple[tuple[CellValue, ...], ...]
    target_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(
            self, "instances", tuple(tuple(row) for row in self.instances)
        )
        n = len(self.attributes)
        for r, row in enumerate(self.instances):
            if len(row) != n:
                raise DataError(
                    f"instance {r}: expected {n} cells, found {len(row)}"
                )
            for c, cell in enumerate(row):
                self._check_cell(r, c, cell)
        if self.target_index is not None:
            if not 0 <= self.target_index < n:
                raise UsageError(f"target index {self.target_index} out of range")
            if not self.attributes[self.target_index].is_nominal:
                raise UsageError("target attribute must be nominal")

    def _check_cell(self, r: int, c: int, cell: CellValue) -> None:
        if cell is None:
            return
        attr = self.attributes[c]
        if attr.is_nominal:
            if not isinstance(cell, int) or isinstance(cell, bool):
                raise DataError(
                    f"instance {r}, attribute {attr.name!r}: nominal cell "
                    f"must be an int index, got {cell!r}"
                )
            if not 0 <= cell < len(attr.values):
                raise DataError(
                    f"instance {r}, attribute {attr.name!r}: value index "
                    f"{cell} out of range"
                )
        else:
            if isinstance(cell, bool) or not isinstance(cell, (int, float)):
                raise DataError(
                    f"instance {r}, attribute {attr.name!r}: numeric cell "
                    f"expected, got {cell!r}"
                )

    @property
    def num_attributes(self) -> int:
        return len(self.attributes)

    @property
    def num_instances(self) -> int:
        return len(self.instances)

    def attribute_index(self, name: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise UsageError(f"no attribute named {name!r}")

    @property
    def target(self) -> AttributeSpec:
        if self.target_index is None:
            raise UsageError("dataset has no target attribute set")
        return self.attributes[self.target_index]

    def with_target(self, attr: int | str | None) -> "Dataset":
        """Copy of this dataset with the target attribute (re)designated."""
        if isinstance(attr, str):
            attr = self.attribute_index(attr)
        return Dataset(self.relation, self.attributes, self.instances, attr)

    def with_instances(
        self, instances: Iterable[Sequence[CellValue]]
    ) -> "Dataset":
        """Copy of this dataset carrying a different instance list."""
        return Dataset(self.relation, self.attributes, tuple(
            tuple(row) for row in instances
        ), self.target_index)

    def value_name(self, attr: int, cell: CellValue) -> str:
        """Human-readable cell text: declared value name, number, or '?'."""
        if cell is None:
            return "?"
        a = self.attributes[attr]
        if a.is_nominal:
            return a.values[cell]
        return format_number(float(cell))


def format_number(x: float) -> str:
    """Render a numeric cell compactly: integral values lose the '.0'."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def parse_ranges(text: str, count: int) -> tuple[int, ...]:
    """Parse a 1-based index range list like ``1,3,6-8`` into sorted unique
    0-based indices, validated against ``count`` columns.
    """
    picked: set[int] = set()
    text = text.strip()
    if not text:
        raise UsageError("empty index range list")
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise UsageError(f"empty entry in index ranges {text!r}")
        if "-" in part:
            lo_s, _, hi_s = part.partition("-")
            lo, hi = _parse_index(lo_s, count), _parse_index(hi_s, count)
            if lo > hi:
                raise UsageError(f"descending range {part!r}")
            picked.update(range(lo, hi + 1))
        else:
            picked.add(_parse_index(part, count))
    return tuple(sorted(picked))


def _parse_index(text: str, count: int) -> int:
    try:
        i = int(text.strip())
    except ValueError:
        raise UsageError(f"bad index {text!r}") from None
    if not 1 <= i <= count:
        raise UsageError(f"index {i} out of range 1..{count}")
    return i - 1


def remove_attributes(
    d: Dataset, ranges: str | Iterable[int | tuple[int, int]]
) -> Dataset:
    """Drop the named 1-based attribute ranges, keeping the rest in order.

    ``ranges`` is either a spec string ("1,3,6-8") or an iterable of
    1-based indices / inclusive (lo, hi) pairs. The target index is
    remapped, or cleared when the target itself is removed. The relation
    name is left untouched.
    """
    if isinstance(ranges, str):
        drop = set(parse_ranges(ranges, d.num_attributes))
    else:
        drop = set()
        for item in ranges:
            if isinstance(item, tuple):
                lo, hi = item
                if not (1 <= lo <= hi <= d.num_attributes):
                    raise UsageError(f"range {item!r} out of range")
                drop.update(range(lo - 1, hi))
            else:
                if not 1 <= item <= d.num_attributes:
                    raise UsageError(
                        f"index {item} out of range 1..{d.num_attributes}"
                    )
                drop.add(item - 1)
    if not drop:
        return d
    keep = [i for i in range(d.num_attributes) if i not in drop]
    if not keep:
        raise UsageError("cannot remove every attribute")
    target = None
    if d.target_index is not None and d.target_index not in drop:
        target = keep.index(d.target_index)
    return Dataset(
        d.relation,
        tuple(d.attributes[i] for i in keep),
        tuple(tuple(row[i] for i in keep) for row in d.instances),
        target,
    )


def column_mode(d: Dataset, attr: int) -> CellValue:
    """Most frequent non-missing value of a nominal column (ties break to
    the lowest declared index); arithmetic mean for a numeric column.
    """
    if not 0 <= attr < d.num_attributes:
        raise UsageError(f"attribute index {attr} out of range")
    spec = d.attributes[attr]
    cells = [row[attr] for row in d.instances if row[attr] is not None]
    if not cells:
        raise DataError(f"attribute {spec.name!r}: every value is missing")
    if spec.is_nominal:
        counts = [0] * len(spec.values)
        for cell in cells:
            counts[cell] += 1
        return max(range(len(counts)), key=lambda i: (counts[i], -i))
    return sum(float(c) for c in cells) / len(cells)
