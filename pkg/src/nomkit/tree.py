"""C4.5-style decision-tree induction over nominal attributes.

Splits are chosen by gain ratio among attributes whose information gain
reaches the mean of the strictly positive gains, with admissibility
requiring at least two branches of weight min_instances or more.
Pessimistic error pruning replaces a subtree by a leaf when the leaf's
upper-confidence error estimate does not exceed the subtree's plus a
0.1 slack; subtree raising is available behind a flag and off by
default. All ties break toward the lowest declaration-order index, so
identical inputs give bit-identical trees and printouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from statistics import NormalDist
from typing import Sequence, Union

from .errors import DataError, UsageError
from .tabular.model import CellValue, Dataset


@dataclass(frozen=True)
class TreeParams:
    """Induction parameters.

    confidence_factor drives the pessimistic error estimate (smaller
    means heavier pruning), min_instances is the minimum branch weight
    for an admissible split.
    """

    confidence_factor: float = 0.25
    min_instances: float = 2.0
    pruning_enabled: bool = True
    subtree_raising: bool = False

    def __post_init__(self):
        if not 0.0 < self.confidence_factor <= 0.5:
            raise UsageError(
                f"confidence factor must be in (0, 0.5], got "
                f"{self.confidence_factor!r}"
            )
        if self.min_instances < 1:
            raise UsageError(
                f"min instances must be at least 1, got {self.min_instances!r}"
            )


@dataclass(frozen=True)
class Leaf:
    """Terminal node: per-class training weights and the predicted class.

    The predicted class of a zero-weight leaf is the majority class of
    its parent split, recorded at build time.
    """

    distribution: tuple[float, ...]
    predicted: int

    @property
    def total_weight(self) -> float:
        return sum(self.distribution)

    @property
    def error_weight(self) -> float:
        return self.total_weight - self.distribution[self.predicted]


@dataclass(frozen=True)
class Split:
    """Internal node: one child per declared value of the split attribute,
    plus the local class distribution of the training instances that
    reached this node.
    """

    attribute: int
    children: tuple["TreeNode", ...]
    distribution: tuple[float, ...]

    @property
    def total_weight(self) -> float:
        return sum(self.distribution)


TreeNode = Union[Leaf, Split]


def majority_class(weights: Sequence[float]) -> int:
    """Index of the heaviest class; ties break to the lowest index."""
    return max(range(len(weights)), key=lambda i: (weights[i], -i))


def entropy(class_weights: Sequence[float]) -> float:
    """Shannon entropy in bits of a non-negative weight vector.

    Zero-weight classes contribute nothing; an all-zero vector returns
    0 by convention.
    """
    total = 0.0
    for w in class_weights:
        if w < 0:
            raise UsageError(f"negative class weight {w!r}")
        total += w
    if total <= 0:
        return 0.0
    h = 0.0
    for w in class_weights:
        if w > 0:
            p = w / total
            h -= p * math.log2(p)
    return h


def gain_and_ratio(
    d: Dataset, attr: int, indices: Sequence[int] | None = None
) -> tuple[float, float, float]:
    """Information gain, gain ratio, and split information of splitting
    the given instances (default: all) on a nominal attribute.

    The ratio is defined as 0 when the split information is 0 (single
    populated branch). Instances missing the attribute's value are
    ignored.
    """
    target = d.target_index
    if target is None:
        raise UsageError("dataset has no target attribute set")
    if attr == target:
        raise UsageError("cannot split on the target attribute")
    if not d.attributes[attr].is_nominal:
        raise UsageError(f"attribute {d.attributes[attr].name!r} is not nominal")
    if indices is None:
        indices = range(d.num_instances)
    n_classes = len(d.attributes[target].values)
    n_values = len(d.attributes[attr].values)
    branches = [[0.0] * n_classes for _ in range(n_values)]
    for i in indices:
        row = d.instances[i]
        v, c = row[attr], row[target]
        if v is None or c is None:
            continue
        branches[v][c] += 1.0
    parent = [sum(b[c] for b in branches) for c in range(n_classes)]
    return _gain_from_branches(parent, branches)


def _gain_from_branches(
    parent: Sequence[float], branches: Sequence[Sequence[float]]
) -> tuple[float, float, float]:
    total = sum(parent)
    if total <= 0:
        return 0.0, 0.0, 0.0
    branch_totals = [sum(b) for b in branches]
    children_h = sum(
        (bt / total) * entropy(b)
        for b, bt in zip(branches, branch_totals)
        if bt > 0
    )
    gain = entropy(parent) - children_h
    split_info = entropy(branch_totals)
    ratio = gain / split_info if split_info > 0 else 0.0
    return gain, ratio, split_info


@lru_cache(maxsize=None)
def _z_quantile(cf: float) -> float:
    return NormalDist().inv_cdf(1.0 - cf)


def upper_error_estimate(n: float, e: float, cf: float) -> float:
    """Pessimistic additional errors for a leaf of weight n with e
    observed errors, at confidence factor cf.

    Returns U such that (e + U) / n is the upper cf-confidence bound of
    the binomial error rate:

    * e = 0: the closed form n * (1 - cf^(1/n));
    * 0 < e < 1: linear interpolation between the e = 0 and e = 1 results;
    * e + 0.5 >= n: the clamp max(n - e, 0);
    * otherwise the continuity-corrected normal approximation with z the
      (1 - cf) standard-normal quantile and f = (e + 0.5) / n.
    """
    if not 0.0 < cf <= 0.5:
        raise UsageError(f"confidence factor must be in (0, 0.5], got {cf!r}")
    if n <= 0:
        raise UsageError(f"leaf weight must be positive, got {n!r}")
    if not 0 <= e <= n:
        raise UsageError(f"error weight {e!r} outside [0, {n}]")
    return _added_errors(n, e, cf)


def _added_errors(n: float, e: float, cf: float) -> float:
    if n <= 0:
        return 0.0
    if e == 0:
        return n * (1.0 - cf ** (1.0 / n))
    if e < 1:
        base = n * (1.0 - cf ** (1.0 / n))
        return base + e * (_added_errors(n, 1.0, cf) - base)
    if e + 0.5 >= n:
        return max(n - e, 0.0)
    z = _z_quantile(cf)
    f = (e + 0.5) / n
    r = (f + z * z / (2 * n)
         + z * math.sqrt(f / n - f * f / n + z * z / (4 * n * n))) \
        / (1 + z * z / n)
    return r * n - e


def build_tree(d: Dataset, params: TreeParams = TreeParams()) -> TreeNode:
    """Grow (and by default prune) a decision tree for the dataset's
    nominal target.

    A node becomes a leaf when its instances share one class, its total
    weight is below twice min_instances, or no admissible split with
    positive gain exists. Among attributes with positive gain whose
    gain reaches the mean positive gain, the split maximizing gain
    ratio wins, ties to the lowest attribute index. Every declared
    value gets a child; empty branches become zero-weight leaves
    predicting the parent majority.
    """
    target = d.target_index
    if target is None:
        raise UsageError("dataset has no target attribute set")
    if d.num_instances == 0:
        raise UsageError("cannot build a tree from an empty dataset")
    for a in d.attributes:
        if not a.is_nominal:
            raise UsageError(
                f"numeric attribute {a.name!r}: only nominal predictors "
                f"are supported"
            )
    for r, row in enumerate(d.instances):
        if any(cell is None for cell in row):
            raise DataError(
                f"instance {r} has a missing value; training data must "
                f"be complete"
            )
    n_classes = len(d.attributes[target].values)
    builder = _Builder(d, params, n_classes)
    root = builder.grow(list(range(d.num_instances)), frozenset())
    if params.pruning_enabled:
        root = builder.prune(root, list(range(d.num_instances)))
    return root


class _Builder:
    """Holds the dataset and parameters during induction."""

    def __init__(self, d: Dataset, params: TreeParams, n_classes: int):
        self.d = d
        self.params = params
        self.n_classes = n_classes
        self.target = d.target_index

    def class_weights(self, indices: Sequence[int]) -> tuple[float, ...]:
        weights = [0.0] * self.n_classes
        for i in indices:
            weights[self.d.instances[i][self.target]] += 1.0
        return tuple(weights)

    def partition(self, indices: Sequence[int], attr: int) -> list[list[int]]:
        parts: list[list[int]] = [
            [] for _ in self.d.attributes[attr].values
        ]
        for i in indices:
            parts[self.d.instances[i][attr]].append(i)
        return parts

    def grow(self, indices: list[int], used: frozenset[int]) -> TreeNode:
        dist = self.class_weights(indices)
        total = sum(dist)
        pred = majority_class(dist)
        if total - dist[pred] == 0 or total < 2 * self.params.min_instances:
            return Leaf(dist, pred)

        candidates = []
        for attr in range(self.d.num_attributes):
            if attr == self.target or attr in used:
                continue
            parts = self.partition(indices, attr)
            branch_dists = [self.class_weights(p) for p in parts]
            branch_totals = [sum(b) for b in branch_dists]
            populated = sum(
                1 for t in branch_totals if t >= self.params.min_instances
            )
            if populated < 2:
                continue
            gain, ratio, _ = _gain_from_branches(dist, branch_dists)
            if gain > 0:
                candidates.append((attr, gain, ratio, parts))

        if not candidates:
            return Leaf(dist, pred)
        mean_gain = sum(g for _, g, _, _ in candidates) / len(candidates)
        best = None
        for attr, gain, ratio, parts in candidates:
            if gain >= mean_gain and (best is None or ratio > best[1]):
                best = (attr, ratio, parts)
        if best is None:
            return Leaf(dist, pred)
        attr, _, parts = best

        children = tuple(
            self.grow(p, used | {attr}) if p
            else Leaf((0.0,) * self.n_classes, pred)
            for p in parts
        )
        return Split(attr, children, dist)

    # -- pruning ---------------------------------------------------------

    def estimated_errors(self, node: TreeNode) -> float:
        if isinstance(node, Leaf):
            return self.leaf_errors(node.distribution)
        return sum(self.estimated_errors(c) for c in node.children)

    def leaf_errors(self, dist: Sequence[float]) -> float:
        n = sum(dist)
        if n <= 0:
            return 0.0
        e = n - max(dist)
        return e + _added_errors(n, e, self.params.confidence_factor)

    def prune(self, node: TreeNode, indices: list[int]) -> TreeNode:
        """Bottom-up pessimistic pruning with the 0.1 comparison slack."""
        if isinstance(node, Leaf):
            return node
        parts = self.partition(indices, node.attribute)
        children = tuple(
            self.prune(c, p) for c, p in zip(node.children, parts)
        )
        node = Split(node.attribute, children, node.distribution)

        leaf_err = self.leaf_errors(node.distribution)
        tree_err = self.estimated_errors(node)
        branch_err = math.inf
        largest = None
        if self.params.subtree_raising:
            totals = [c.total_weight for c in children]
            largest = majority_class(totals)  # same tie rule: lowest index
            raised = self.refit(
                children[largest], indices,
                majority_class(node.distribution),
            )
            branch_err = self.estimated_errors(raised)

        if leaf_err <= tree_err + 0.1 and leaf_err <= branch_err + 0.1:
            return Leaf(node.distribution, majority_class(node.distribution))
        if self.params.subtree_raising and branch_err <= tree_err + 0.1:
            # raise the largest branch, refit it with all of this node's
            # instances, then prune the result again
            raised = self.refit(
                children[largest], indices,
                majority_class(node.distribution),
            )
            return self.prune(raised, indices)
        return node

    def refit(
        self, node: TreeNode, indices: list[int], parent_majority: int
    ) -> TreeNode:
        """Recompute a subtree's distributions from a new instance set,
        keeping its split structure."""
        dist = self.class_weights(indices)
        if isinstance(node, Leaf):
            pred = majority_class(dist) if sum(dist) > 0 else parent_majority
            return Leaf(dist, pred)
        pred = majority_class(dist) if sum(dist) > 0 else parent_majority
        parts = self.partition(indices, node.attribute)
        children = tuple(
            self.refit(c, p, pred) for c, p in zip(node.children, parts)
        )
        return Split(node.attribute, children, dist)


def predict(
    tree: TreeNode, instance: Sequence[CellValue]
) -> tuple[int, tuple[float, ...]]:
    """Classify one instance: (class index, class probability vector).

    The instance must align with the training schema (the target cell
    is ignored). A missing value at a split follows the branch with the
    highest training weight. A zero-weight leaf answers with its parent
    split's distribution.
    """
    parent_dist: tuple[float, ...] | None = None
    node = tree
    while isinstance(node, Split):
        parent_dist = node.distribution
        cell = instance[node.attribute]
        if cell is None:
            totals = [c.total_weight for c in node.children]
            cell = majority_class(totals)
        elif not 0 <= cell < len(node.children):
            raise DataError(
                f"value index {cell!r} out of range at attribute "
                f"{node.attribute}"
            )
        node = node.children[cell]
    dist = node.distribution
    total = sum(dist)
    if total <= 0 and parent_dist is not None:
        dist, total = parent_dist, sum(parent_dist)
    if total <= 0:
        k = len(dist)
        return node.predicted, tuple(1.0 / k for _ in dist)
    return node.predicted, tuple(w / total for w in dist)


def leaf_count(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 1
    return sum(leaf_count(c) for c in tree.children)


def tree_size(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + sum(tree_size(c) for c in tree.children)


def print_tree(tree: TreeNode, d: Dataset) -> str:
    """Render a tree in the classic one-branch-per-line layout.

    Depth shows as repeated '|   ' prefixes; a branch to a leaf ends in
    ': class (weight)' or ': class (weight/errors)', weights rounded to
    two figures and printed with at least one decimal. The footer
    reports the leaf count and total node count.
    """
    class_names = d.attributes[d.target_index].values
    lines: list[str] = []
    if isinstance(tree, Leaf):
        lines.append(": " + _leaf_label(tree, class_names))
    else:
        _dump(tree, d, 0, lines, class_names)
    body = "\n".join(lines)
    return (
        f"{body}\n\nNumber of Leaves  :\t{leaf_count(tree)}\n\n"
        f"Size of the tree :\t{tree_size(tree)}\n"
    )


def _dump(node: Split, d: Dataset, depth: int, lines: list[str],
          class_names: tuple[str, ...]) -> None:
    attr = d.attributes[node.attribute]
    prefix = "|   " * depth
    for value, child in zip(attr.values, node.children):
        head = f"{prefix}{attr.name} = {value}"
        if isinstance(child, Leaf):
            lines.append(f"{head}: {_leaf_label(child, class_names)}")
        else:
            lines.append(head)
            _dump(child, d, depth + 1, lines, class_names)


def _leaf_label(leaf: Leaf, class_names: tuple[str, ...]) -> str:
    n = leaf.total_weight
    e = leaf.error_weight
    label = f"{class_names[leaf.predicted]} ({_weight(n)}"
    if e > 0:
        label += f"/{_weight(e)}"
    return label + ")"


def _weight(x: float) -> str:
    return repr(round(x, 2))
