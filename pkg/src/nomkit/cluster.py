"""Simple k-means over nominal attributes (k-modes).

Distance between instances is the square root of the number of
mismatched attributes (0/1 per-attribute Euclidean), centroids are
per-attribute modes, and the within-cluster sum of squared errors is
therefore the total mismatch count against assigned centroids. All
ties break toward the lowest index so a given (dataset, k, seed) is
fully reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import UsageError
from .tabular.model import CellValue, Dataset, column_mode, format_number


@dataclass(frozen=True)
class ClusterParams:
    k: int = 2
    seed: int = 10
    max_iterations: int = 500

    def __post_init__(self):
        if self.k < 1:
            raise UsageError(f"cluster count must be at least 1, got {self.k}")
        if self.max_iterations < 1:
            raise UsageError(
                f"iteration limit must be at least 1, got "
                f"{self.max_iterations}"
            )


@dataclass(frozen=True)
class ClusterModel:
    """Fitted clustering: one centroid row per cluster, an assignment
    per instance, the final SSE, and the number of assignment passes."""

    centroids: tuple[tuple[CellValue, ...], ...]
    assignment: tuple[int, ...]
    sse: float
    iterations: int

    @property
    def k(self) -> int:
        return len(self.centroids)

    @property
    def cluster_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.k
        for c in self.assignment:
            sizes[c] += 1
        return tuple(sizes)


def impute_modes(d: Dataset) -> Dataset:
    """Replace every missing cell by its column's mode (nominal) or
    mean (numeric). Datasets without missing cells come back unchanged.
    """
    if not any(cell is None for row in d.instances for cell in row):
        return d
    fills = [
        column_mode(d, j) if any(row[j] is None for row in d.instances)
        else None
        for j in range(d.num_attributes)
    ]
    rows = tuple(
        tuple(fills[j] if cell is None else cell
              for j, cell in enumerate(row))
        for row in d.instances
    )
    return d.with_instances(rows)


def nominal_distance(a: Sequence[CellValue], b: Sequence[CellValue]) -> float:
    """Euclidean distance with 0/1 per-attribute differences: the square
    root of the number of attributes on which the instances disagree."""
    if len(a) != len(b):
        raise UsageError(
            f"instances have different widths: {len(a)} vs {len(b)}"
        )
    for x, y in zip(a, b):
        if x is None or y is None:
            raise UsageError("cannot measure distance with missing values")
    return math.sqrt(_mismatches(a, b))


def _mismatches(a: Sequence[CellValue], b: Sequence[CellValue]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def kmeans(d: Dataset, params: ClusterParams = ClusterParams()) -> ClusterModel:
    """Cluster an all-nominal dataset into k mode-centroid clusters.

    Missing cells are imputed with column modes first. Initial
    centroids are the first k distinct value tuples of a seeded shuffle
    of the instances; each pass assigns every instance to its nearest
    centroid (ties to the lowest cluster index) and recomputes each
    centroid attribute as the within-cluster mode (ties to the lowest
    value index). A cluster that loses all instances is reseeded with
    the instance currently farthest from its own centroid. Iterations
    count assignment passes, so a run that converges on its second pass
    reports 2.
    """
    for a in d.attributes:
        if not a.is_nominal:
            raise UsageError(
                f"numeric attribute {a.name!r}: clustering supports only "
                f"nominal attributes"
            )
    n = d.num_instances
    if params.k > n:
        raise UsageError(
            f"cluster count {params.k} exceeds instance count {n}"
        )
    d = impute_modes(d)
    rows = d.instances

    rng = random.Random(params.seed)
    order = list(range(n))
    rng.shuffle(order)
    centroids: list[tuple[CellValue, ...]] = []
    seen = set()
    for i in order:
        if rows[i] not in seen:
            seen.add(rows[i])
            centroids.append(rows[i])
            if len(centroids) == params.k:
                break
    if len(centroids) < params.k:
        raise UsageError(
            f"cannot seed {params.k} clusters: only {len(centroids)} "
            f"distinct instances"
        )

    n_values = [len(a.values) for a in d.attributes]
    assignment = [0] * n
    prev: list[int] | None = None
    iterations = 0
    last_sse = math.inf
    while iterations < params.max_iterations:
        for i in range(n):
            assignment[i] = min(
                range(params.k),
                key=lambda c: (_mismatches(rows[i], centroids[c]), c),
            )
        iterations += 1

        sizes = [0] * params.k
        for c in assignment:
            sizes[c] += 1
        for c in range(params.k):
            if sizes[c] == 0:
                farthest = max(
                    range(n),
                    key=lambda i: (_mismatches(rows[i],
                                               centroids[assignment[i]]), -i),
                )
                sizes[assignment[farthest]] -= 1
                assignment[farthest] = c
                sizes[c] = 1
                centroids[c] = rows[farthest]

        sse = _sse(rows, centroids, assignment)
        if sse > last_sse:
            raise AssertionError(
                f"SSE increased from {last_sse} to {sse} on pass {iterations}"
            )
        last_sse = sse
        if assignment == prev:
            break
        prev = list(assignment)

        for c in range(params.k):
            members = [i for i in range(n) if assignment[i] == c]
            centroids[c] = tuple(
                _mode(members, rows, j, n_values[j])
                for j in range(d.num_attributes)
            )

    return ClusterModel(
        centroids=tuple(centroids),
        assignment=tuple(assignment),
        sse=float(_sse(rows, centroids, assignment)),
        iterations=iterations,
    )


def _mode(members: list[int], rows, j: int, n_vals: int) -> int:
    counts = [0] * n_vals
    for i in members:
        counts[rows[i][j]] += 1
    return max(range(n_vals), key=lambda v: (counts[v], -v))


def _sse(rows, centroids, assignment) -> int:
    return sum(
        _mismatches(rows[i], centroids[assignment[i]])
        for i in range(len(rows))
    )


def format_cluster_report(
    m: ClusterModel,
    d: Dataset,
    params: ClusterParams,
    timings: dict[str, float] | None = None,
) -> str:
    """Clustering report: run information, iteration and SSE lines, the
    centroid table with a Full Data column, and the clustered-instances
    block with rounded percentages."""
    n = d.num_instances
    lines = [
        "=== Run information ===",
        "",
        f"Scheme:       nomkit cluster -N {params.k} -S {params.seed} "
        f"-I {params.max_iterations}",
        f"Relation:     {d.relation}",
        f"Instances:    {n}",
        f"Attributes:   {d.num_attributes}",
    ]
    lines += [f"              {a.name}" for a in d.attributes]
    lines += [
        "Test mode:    evaluate on training data",
        "",
        "=== Model and evaluation on training set ===",
        "",
        "kMeans",
        "======",
        "",
        f"Number of iterations: {m.iterations}",
        f"Within cluster sum of squared errors: {repr(float(m.sse))}",
        "Missing values globally replaced with mean/mode",
        "",
        "Cluster centroids:",
    ]

    full = [column_mode(d, j) for j in range(d.num_attributes)]
    sizes = m.cluster_sizes

    def cell_text(j: int, v: CellValue) -> str:
        attr = d.attributes[j]
        return attr.values[v] if attr.is_nominal else format_number(v)

    names = [a.name for a in d.attributes]
    columns = [["Attribute", ""] + names,
               ["Full Data", f"({n})"] + [cell_text(j, full[j])
                                          for j in range(len(names))]]
    for c in range(m.k):
        columns.append([str(c), f"({sizes[c]})"]
                       + [cell_text(j, m.centroids[c][j])
                          for j in range(len(names))])
    widths = [max(len(s) for s in col) for col in columns]

    def table_row(r: int) -> str:
        head = f"{columns[0][r]:<{widths[0]}}"
        rest = "".join(f"  {columns[c][r]:>{widths[c]}}"
                       for c in range(1, len(columns)))
        return (head + rest).rstrip()

    total_width = sum(widths) + 2 * (len(columns) - 1)
    lines += [
        f"{'Cluster#':>{total_width}}",
        table_row(0),
        table_row(1),
        "=" * total_width,
    ]
    lines += [table_row(r) for r in range(2, 2 + len(names))]
    lines.append("")
    if timings:
        lines += [f"Time taken to {what}: {secs:.2f} seconds"
                  for what, secs in timings.items()]
        lines.append("")
    lines += ["Clustered Instances", ""]
    wc = max(len(str(s)) for s in sizes)
    for c in range(m.k):
        pct = round(100.0 * sizes[c] / n) if n else 0
        lines.append(f"{c:<7}{sizes[c]:>{wc}} ({pct:>3}%)")
    return "\n".join(lines) + "\n"
