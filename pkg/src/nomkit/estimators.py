"""scikit-learn flavored wrappers around the tree and clustering cores.

Both estimators take a Dataset (the package's schema-aware table) in
fit and expose the usual get_params/set_params machinery, so they
compose with scikit-learn tooling that only relies on the estimator
protocol. Fitted state lives in trailing-underscore attributes.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .cluster import ClusterModel, ClusterParams, kmeans, _mismatches
from .errors import UsageError
from .tabular.model import Dataset
from .tree import (
    TreeParams,
    build_tree,
    leaf_count,
    predict,
    print_tree,
    tree_size,
)
from .validation import (
    as_instance_rows,
    ensure_dataset,
    ensure_fitted,
    ensure_schema_match,
)


class C45TreeClassifier(BaseEstimator):
    """Decision-tree classifier with gain-ratio splits and pessimistic
    pruning.

    Parameters mirror TreeParams. fit expects a Dataset whose target is
    set (or a target name passed to fit); predict accepts a Dataset
    with the same schema or raw index rows, and returns class value
    names.
    """

    def __init__(self, confidence_factor: float = 0.25,
                 min_instances: float = 2.0, pruning_enabled: bool = True,
                 subtree_raising: bool = False):
        self.confidence_factor = confidence_factor
        self.min_instances = min_instances
        self.pruning_enabled = pruning_enabled
        self.subtree_raising = subtree_raising

    def _params(self) -> TreeParams:
        return TreeParams(
            confidence_factor=self.confidence_factor,
            min_instances=self.min_instances,
            pruning_enabled=self.pruning_enabled,
            subtree_raising=self.subtree_raising,
        )

    def fit(self, d: Dataset, target: str | None = None):
        d = ensure_dataset(d)
        if target is not None:
            d = d.with_target(target)
        if d.target_index is None:
            raise UsageError("dataset has no target; pass target=<name>")
        self.tree_ = build_tree(d, self._params())
        self.schema_ = d.attributes
        self.target_index_ = d.target_index
        self.classes_ = d.attributes[d.target_index].values
        self.n_leaves_ = leaf_count(self.tree_)
        self.tree_size_ = tree_size(self.tree_)
        return self

    def _rows(self, x):
        ensure_fitted(self, "tree_")
        if isinstance(x, Dataset):
            ensure_schema_match(x, tuple(a.name for a in self.schema_))
        return as_instance_rows(x, len(self.schema_))

    def predict(self, x) -> list[str]:
        return [self.classes_[predict(self.tree_, row)[0]]
                for row in self._rows(x)]

    def predict_proba(self, x) -> list[tuple[float, ...]]:
        return [predict(self.tree_, row)[1] for row in self._rows(x)]

    def score(self, d: Dataset, y=None) -> float:
        """Accuracy on a dataset carrying its own target column."""
        d = ensure_dataset(d)
        rows = self._rows(d)
        if d.target_index is None:
            raise UsageError("dataset has no target to score against")
        correct = 0
        for row in rows:
            if row[d.target_index] is None:
                raise UsageError("cannot score instances with a missing "
                                 "class value")
            correct += predict(self.tree_, row)[0] == row[d.target_index]
        return correct / len(rows) if rows else 0.0

    def to_text(self) -> str:
        """The fitted tree in the classic one-branch-per-line layout."""
        ensure_fitted(self, "tree_")
        shell = Dataset(
            relation="tree",
            attributes=self.schema_,
            instances=(),
            target_index=self.target_index_,
        )
        return print_tree(self.tree_, shell)


class NominalKMeans(BaseEstimator):
    """k-means over nominal attributes with mode centroids."""

    def __init__(self, k: int = 2, seed: int = 10,
                 max_iterations: int = 500):
        self.k = k
        self.seed = seed
        self.max_iterations = max_iterations

    def _params(self) -> ClusterParams:
        return ClusterParams(k=self.k, seed=self.seed,
                             max_iterations=self.max_iterations)

    def fit(self, d: Dataset, y=None):
        d = ensure_dataset(d)
        model: ClusterModel = kmeans(d, self._params())
        self.model_ = model
        self.schema_ = d.attributes
        self.labels_ = model.assignment
        self.cluster_centers_ = tuple(
            tuple(d.attributes[j].values[v] for j, v in enumerate(row))
            for row in model.centroids
        )
        self.inertia_ = model.sse
        self.n_iterations_ = model.iterations
        return self

    def fit_predict(self, d: Dataset, y=None) -> tuple[int, ...]:
        return self.fit(d).labels_

    def predict(self, x) -> list[int]:
        """Nearest-centroid assignment for new rows (ties to the lowest
        cluster index)."""
        ensure_fitted(self, "model_")
        if isinstance(x, Dataset):
            ensure_schema_match(x, tuple(a.name for a in self.schema_))
        rows = as_instance_rows(x, len(self.schema_))
        out = []
        for i, row in enumerate(rows):
            if any(cell is None for cell in row):
                raise UsageError(f"row {i} has a missing value; impute first")
            out.append(min(
                range(len(self.model_.centroids)),
                key=lambda c: (_mismatches(row, self.model_.centroids[c]), c),
            ))
        return out
