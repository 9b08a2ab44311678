"""Argument checks shared by the estimator wrappers."""

from __future__ import annotations

import numbers
from typing import Sequence

from .errors import UsageError
from .tabular.model import CellValue, Dataset


def ensure_dataset(x) -> Dataset:
    if not isinstance(x, Dataset):
        raise UsageError(
            f"expected a Dataset, got {type(x).__name__}; build one with "
            f"parse_arff/parse_csv or the Dataset constructor"
        )
    return x


def ensure_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise UsageError(
            f"{type(estimator).__name__} is not fitted yet; call fit first"
        )


def ensure_schema_match(d: Dataset, names: Sequence[str]) -> None:
    got = tuple(a.name for a in d.attributes)
    if got != tuple(names):
        raise UsageError(
            f"dataset schema {got!r} does not match the fitted schema "
            f"{tuple(names)!r}"
        )


def as_instance_rows(
    x, width: int
) -> tuple[tuple[CellValue, ...], ...]:
    """Accept a Dataset or an iterable of rows; return plain row tuples
    of the expected width. Raw rows must carry value indices (any
    integral type) or None for missing."""
    if isinstance(x, Dataset):
        for i, r in enumerate(x.instances):
            if len(r) != width:
                raise UsageError(
                    f"row {i} has {len(r)} cells, expected {width}"
                )
        return x.instances
    rows = []
    for i, r in enumerate(x):
        row = tuple(r)
        if len(row) != width:
            raise UsageError(
                f"row {i} has {len(row)} cells, expected {width}"
            )
        cells = []
        for j, cell in enumerate(row):
            if cell is None:
                cells.append(None)
            elif isinstance(cell, numbers.Integral):
                cells.append(int(cell))
            else:
                raise UsageError(
                    f"row {i} cell {j} is {cell!r}; expected a value "
                    "index or None"
                )
        rows.append(tuple(cells))
    return tuple(rows)
