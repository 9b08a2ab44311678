"""Stratified cross-validation and classic classifier-report metrics.

An Evaluation pools per-instance predicted distributions (plus each
instance's training-fold class prior, the baseline for the relative
error figures) across folds. Metrics follow the textbook definitions:
accuracy, kappa, MAE/RMSE over probability vectors, relative errors
against the prior baseline, one-vs-rest class metrics, and rank-based
ROC areas. The formatter reproduces the traditional report layout with
right-justified, zero-trimmed numbers.
"""

from __future__ import annotations

import math
import random
import string
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DataError, UsageError
from .tabular.model import Dataset, format_number
from .tree import TreeNode, TreeParams, build_tree, predict


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each instance to one of k folds."""

    k: int
    seed: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        if self.k < 2:
            raise UsageError(f"fold count must be at least 2, got {self.k}")
        for f in self.assignment:
            if not 0 <= f < self.k:
                raise UsageError(f"fold index {f} outside 0..{self.k - 1}")

    def test_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f == fold]

    def train_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignment) if f != fold]


def stratified_folds(d: Dataset, k: int, seed: int) -> FoldPlan:
    """Deal instances into k folds preserving class proportions.

    The instance order is shuffled once with Python's Mersenne Twister
    (random.Random(seed), platform-independent), then each class's
    instances are dealt round-robin; the dealing pointer continues from
    one class to the next so overall fold sizes also differ by at most
    one.
    """
    target = d.target_index
    if target is None:
        raise UsageError("dataset has no target attribute set")
    n = d.num_instances
    if k < 2:
        raise UsageError(f"fold count must be at least 2, got {k}")
    if k > n:
        raise UsageError(f"fold count {k} exceeds instance count {n}")
    n_classes = len(d.attributes[target].values)
    counts = [0] * n_classes
    for r, row in enumerate(d.instances):
        if row[target] is None:
            raise DataError(f"instance {r} has a missing class value")
        counts[row[target]] += 1
    for c, cnt in enumerate(counts):
        if cnt == 0:
            raise UsageError(
                f"class {d.attributes[target].values[c]!r} has no instances"
            )
    order = list(range(n))
    random.Random(seed).shuffle(order)
    assignment = [0] * n
    fold = 0
    for c in range(n_classes):
        for i in order:
            if d.instances[i][target] == c:
                assignment[i] = fold
                fold = (fold + 1) % k
    return FoldPlan(k, seed, tuple(assignment))


@dataclass(frozen=True)
class Evaluation:
    """Pooled predictions of a classification experiment.

    Parallel tuples, one entry per scored instance: the actual class
    index, the predicted class index, the predicted class distribution,
    and the class prior of the training data that produced the
    prediction (the baseline predictor for relative errors).
    """

    class_names: tuple[str, ...]
    actual: tuple[int, ...]
    predicted: tuple[int, ...]
    predicted_dist: tuple[tuple[float, ...], ...]
    baseline_prior: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        n = len(self.actual)
        if not (len(self.predicted) == len(self.predicted_dist)
                == len(self.baseline_prior) == n):
            raise UsageError("evaluation fields have mismatched lengths")
        for dist in self.predicted_dist:
            if abs(sum(dist) - 1.0) > 1e-9:
                raise UsageError(
                    f"predicted distribution sums to {sum(dist)!r}, not 1"
                )

    @property
    def num_instances(self) -> int:
        return len(self.actual)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    @property
    def confusion(self) -> tuple[tuple[int, ...], ...]:
        """Count matrix, rows = actual class, columns = predicted."""
        k = self.num_classes
        m = [[0] * k for _ in range(k)]
        for a, p in zip(self.actual, self.predicted):
            m[a][p] += 1
        return tuple(tuple(row) for row in m)

    @property
    def correct(self) -> int:
        return sum(1 for a, p in zip(self.actual, self.predicted) if a == p)


def class_priors(d: Dataset, indices: Sequence[int] | None = None
                 ) -> tuple[float, ...]:
    """Relative class frequencies over the given instances (default all)."""
    target = d.target_index
    if target is None:
        raise UsageError("dataset has no target attribute set")
    if indices is None:
        indices = range(d.num_instances)
    counts = [0] * len(d.attributes[target].values)
    total = 0
    for i in indices:
        c = d.instances[i][target]
        if c is None:
            raise DataError(f"instance {i} has a missing class value")
        counts[c] += 1
        total += 1
    if total == 0:
        raise UsageError("cannot compute priors of zero instances")
    return tuple(c / total for c in counts)


def evaluate_model(
    tree: TreeNode,
    d: Dataset,
    indices: Sequence[int] | None = None,
    baseline: Sequence[float] | None = None,
) -> Evaluation:
    """Score a fitted tree on the given instances (default: all).

    baseline is the class prior of the tree's training data; defaults
    to the prior of the scored instances themselves (training-set
    evaluation).
    """
    target = d.target_index
    if target is None:
        raise UsageError("dataset has no target attribute set")
    if indices is None:
        indices = range(d.num_instances)
    indices = list(indices)
    prior = tuple(baseline) if baseline is not None else class_priors(d, indices)
    actual, pred, dists, priors = [], [], [], []
    for i in indices:
        row = d.instances[i]
        if row[target] is None:
            raise DataError(f"instance {i} has a missing class value")
        cls, dist = predict(tree, row)
        actual.append(row[target])
        pred.append(cls)
        dists.append(dist)
        priors.append(prior)
    return Evaluation(
        class_names=d.attributes[target].values,
        actual=tuple(actual),
        predicted=tuple(pred),
        predicted_dist=tuple(dists),
        baseline_prior=tuple(priors),
    )


def evaluate_training(d: Dataset, params: TreeParams = TreeParams()
                      ) -> Evaluation:
    """Train on the full dataset and score the training instances."""
    return evaluate_model(build_tree(d, params), d)


def cross_validate(
    d: Dataset,
    params: TreeParams = TreeParams(),
    k: int = 10,
    seed: int = 1,
    threads: int = 1,
) -> Evaluation:
    """Stratified k-fold cross-validation of a tree classifier.

    Each fold's model trains on the complement and scores the held-out
    instances; predictions are pooled in instance order, so the result
    is identical whether folds run sequentially or on threads.
    """
    plan = stratified_folds(d, k, seed)
    n = d.num_instances
    target = d.target_index
    results: list[tuple[int, int, tuple[float, ...], tuple[float, ...]] | None]
    results = [None] * n

    def run_fold(f: int) -> None:
        train = plan.train_indices(f)
        train_d = d.with_instances(tuple(d.instances[i] for i in train))
        tree = build_tree(train_d, params)
        prior = class_priors(d, train)
        for i in plan.test_indices(f):
            row = d.instances[i]
            cls, dist = predict(tree, row)
            results[i] = (row[target], cls, dist, prior)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_fold, range(k)))
    else:
        for f in range(k):
            run_fold(f)

    return Evaluation(
        class_names=d.attributes[target].values,
        actual=tuple(r[0] for r in results),
        predicted=tuple(r[1] for r in results),
        predicted_dist=tuple(r[2] for r in results),
        baseline_prior=tuple(r[3] for r in results),
    )


# -- scalar metrics --------------------------------------------------------


def summary_metrics(ev: Evaluation) -> dict[str, float]:
    """Accuracy, kappa, MAE, RMSE, and prior-relative errors.

    Error figures treat the actual class as a one-hot vector: MAE is
    the mean over instances of the per-class absolute differences
    divided by the class count, RMSE likewise with squares. rae and
    rrse divide by the same figure for the baseline predictor that
    answers each instance with its training prior; both are fractions
    (multiply by 100 for the report's percentages).
    """
    n = ev.num_instances
    if n == 0:
        raise UsageError("cannot summarize an empty evaluation")
    k = ev.num_classes
    conf = ev.confusion
    accuracy = ev.correct / n

    row_sums = [sum(conf[c]) for c in range(k)]
    col_sums = [sum(conf[r][c] for r in range(k)) for c in range(k)]
    p_e = sum(row_sums[c] * col_sums[c] for c in range(k)) / (n * n)
    kappa = 0.0 if p_e == 1.0 else (accuracy - p_e) / (1.0 - p_e)

    abs_sum = sq_sum = base_abs = base_sq = 0.0
    for a, dist, prior in zip(ev.actual, ev.predicted_dist,
                              ev.baseline_prior):
        for c in range(k):
            t = 1.0 if c == a else 0.0
            abs_sum += abs(dist[c] - t)
            sq_sum += (dist[c] - t) ** 2
            base_abs += abs(prior[c] - t)
            base_sq += (prior[c] - t) ** 2
    mae = abs_sum / (n * k)
    rmse = math.sqrt(sq_sum / (n * k))
    base_mae = base_abs / (n * k)
    base_rmse = math.sqrt(base_sq / (n * k))
    if base_mae == 0 or base_rmse == 0:
        raise UsageError(
            "baseline error is zero; relative errors are undefined"
        )
    return {
        "accuracy": accuracy,
        "kappa": kappa,
        "mae": mae,
        "rmse": rmse,
        "rae": mae / base_mae,
        "rrse": rmse / base_rmse,
    }


@dataclass(frozen=True)
class ClassMetrics:
    """One-vs-rest metrics for a single class (or the weighted average).

    undefined names the cells whose denominator was zero and were
    reported as 0.
    """

    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    roc_area: float
    undefined: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class PerClassReport:
    classes: tuple[ClassMetrics, ...]
    weighted: ClassMetrics


def per_class_metrics(ev: Evaluation) -> PerClassReport:
    """Per-class TP/FP rates, precision, recall, F-measure and ROC area,
    plus the average weighted by actual class counts."""
    n = ev.num_instances
    if n == 0:
        raise UsageError("cannot summarize an empty evaluation")
    k = ev.num_classes
    conf = ev.confusion
    row_sums = [sum(conf[c]) for c in range(k)]
    col_sums = [sum(conf[r][c] for r in range(k)) for c in range(k)]

    per_class = []
    for c in range(k):
        undefined = set()

        def ratio(num: float, den: float, cell: str) -> float:
            if den == 0:
                undefined.add(cell)
                return 0.0
            return num / den

        tp = conf[c][c]
        fn = row_sums[c] - tp
        fp = col_sums[c] - tp
        tn = n - tp - fn - fp
        tp_rate = ratio(tp, tp + fn, "tp_rate")
        fp_rate = ratio(fp, fp + tn, "fp_rate")
        precision = ratio(tp, tp + fp, "precision")
        f = ratio(2 * precision * tp_rate, precision + tp_rate, "f_measure")
        try:
            roc = roc_auc([dist[c] for dist in ev.predicted_dist],
                          [a == c for a in ev.actual])
        except UsageError:
            undefined.add("roc_area")
            roc = 0.0
        per_class.append(ClassMetrics(
            tp_rate=tp_rate, fp_rate=fp_rate, precision=precision,
            recall=tp_rate, f_measure=f, roc_area=roc,
            undefined=frozenset(undefined),
        ))

    def wavg(metric: str) -> float:
        return sum(row_sums[c] * getattr(per_class[c], metric)
                   for c in range(k)) / n

    weighted = ClassMetrics(
        tp_rate=wavg("tp_rate"), fp_rate=wavg("fp_rate"),
        precision=wavg("precision"), recall=wavg("recall"),
        f_measure=wavg("f_measure"), roc_area=wavg("roc_area"),
        undefined=frozenset().union(*(m.undefined for m in per_class)),
    )
    return PerClassReport(classes=tuple(per_class), weighted=weighted)


def roc_auc(scores: Sequence[float], positives: Sequence[bool]) -> float:
    """Area under the ROC curve via the Mann-Whitney rank statistic.

    Equals the fraction of (positive, negative) pairs where the
    positive instance scores strictly higher, counting ties as one
    half; identical to the trapezoidal area under the empirical curve.
    """
    if len(scores) != len(positives):
        raise UsageError("scores and positive flags differ in length")
    n = len(scores)
    n_pos = sum(1 for p in positives if p)
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UsageError("ROC area needs at least one positive and one "
                         "negative instance")
    order = sorted(range(n), key=lambda i: scores[i])
    rank_sum = 0.0
    i = 0
    while i < n:
        j = i
        while j < n and scores[order[j]] == scores[order[i]]:
            j += 1
        avg_rank = (i + j + 1) / 2.0  # ranks are 1-based
        rank_sum += avg_rank * sum(1 for t in range(i, j)
                                   if positives[order[t]])
        i = j
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


# -- report formatting -----------------------------------------------------


def dts(value: float, decimals: int) -> str:
    """Fixed-point with trailing zeros (and a bare trailing dot) trimmed."""
    s = f"{value:.{decimals}f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    if s in ("-0", ""):
        s = "0"
    return s


def _summary_line(label: str, value: str) -> str:
    return f"{label:<35}{value:>12}"


def format_report(
    ev: Evaluation,
    d: Dataset,
    params: TreeParams,
    tree_text: str,
    test_mode: str,
    timings: dict[str, float] | None = None,
) -> str:
    """Assemble the full classifier report: run information, the pruned
    tree, the evaluation summary, per-class details, and the confusion
    matrix.

    Timings are optional so repeated runs can stay byte-identical; when
    given, they render as 'Time taken to ...' lines.
    """
    if ev.num_instances == 0:
        raise UsageError("cannot format an empty evaluation")
    s = summary_metrics(ev)
    pc = per_class_metrics(ev)
    n = ev.num_instances

    scheme = f"nomkit tree -C {format_number(params.confidence_factor)} " \
             f"-M {format_number(params.min_instances)}"
    if not params.pruning_enabled:
        scheme += " -U"
    lines = [
        "=== Run information ===",
        "",
        f"Scheme:       {scheme}",
        f"Relation:     {d.relation}",
        f"Instances:    {d.num_instances}",
        f"Attributes:   {d.num_attributes}",
    ]
    lines += [f"              {a.name}" for a in d.attributes]
    lines += [
        f"Test mode:    {test_mode}",
        "",
        "=== Classifier model (full training set) ===",
        "",
        "C4.5 pruned tree",
        "----------------",
        "",
        tree_text.rstrip("\n"),
        "",
    ]
    if timings:
        lines += [f"Time taken to {what}: {secs:.2f} seconds"
                  for what, secs in timings.items()]
        lines.append("")

    correct, incorrect = ev.correct, n - ev.correct
    lines += [
        f"=== {_eval_heading(test_mode)} ===",
        "=== Summary ===",
        "",
        _summary_line("Correctly Classified Instances", dts(correct, 4))
        + f"     {dts(100.0 * correct / n, 4):>12} %",
        _summary_line("Incorrectly Classified Instances", dts(incorrect, 4))
        + f"     {dts(100.0 * incorrect / n, 4):>12} %",
        _summary_line("Kappa statistic", dts(s["kappa"], 4)),
        _summary_line("Mean absolute error", dts(s["mae"], 4)),
        _summary_line("Root mean squared error", dts(s["rmse"], 4)),
        _summary_line("Relative absolute error", dts(100.0 * s["rae"], 4))
        + " %",
        _summary_line("Root relative squared error",
                      dts(100.0 * s["rrse"], 4)) + " %",
        _summary_line("Total Number of Instances", dts(n, 4)),
        "",
        "=== Detailed Accuracy By Class ===",
        "",
    ]

    header = " " * 13 + "".join(f"{h:>10}" for h in (
        "TP Rate", "FP Rate", "Precision", "Recall", "F-Measure",
        "ROC Area")) + "  Class"
    lines.append(header)

    def metrics_row(prefix: str, m: ClassMetrics, name: str = "") -> str:
        row = f"{prefix:<13}" + "".join(f"{dts(v, 3):>10}" for v in (
            m.tp_rate, m.fp_rate, m.precision, m.recall, m.f_measure,
            m.roc_area))
        return row + (f"  {name}" if name else "")

    for c, m in enumerate(pc.classes):
        lines.append(metrics_row("", m, ev.class_names[c]))
    lines.append(metrics_row("Weighted Avg.", pc.weighted))
    lines += ["", "=== Confusion Matrix ===", ""]
    lines += _confusion_block(ev)
    return "\n".join(lines) + "\n"


def _eval_heading(test_mode: str) -> str:
    if "cross-validation" in test_mode:
        return "Stratified cross-validation"
    return "Evaluation on training set"


def _confusion_block(ev: Evaluation) -> list[str]:
    conf = ev.confusion
    k = ev.num_classes
    tags = (string.ascii_lowercase + string.ascii_uppercase)
    if k > len(tags):
        raise UsageError(f"confusion matrix legend supports at most "
                         f"{len(tags)} classes, got {k}")
    width = max(len(str(cell)) for row in conf for cell in row)
    lines = [" " + " ".join(f"{tags[c]:>{width}}" for c in range(k))
             + "   <-- classified as"]
    for r in range(k):
        cells = " ".join(f"{conf[r][c]:>{width}}" for c in range(k))
        lines.append(f" {cells} |   {tags[r]} = {ev.class_names[r]}")
    return lines


def machine_summary(ev: Evaluation) -> str:
    """key=value rendering of the summary and weighted metrics, one per
    line, for scripted consumption."""
    s = summary_metrics(ev)
    pc = per_class_metrics(ev)
    pairs = [
        ("instances", ev.num_instances),
        ("correct", ev.correct),
        ("incorrect", ev.num_instances - ev.correct),
        ("accuracy", repr(s["accuracy"])),
        ("kappa", repr(s["kappa"])),
        ("mae", repr(s["mae"])),
        ("rmse", repr(s["rmse"])),
        ("rae", repr(s["rae"])),
        ("rrse", repr(s["rrse"])),
        ("weighted_tp_rate", repr(pc.weighted.tp_rate)),
        ("weighted_fp_rate", repr(pc.weighted.fp_rate)),
        ("weighted_precision", repr(pc.weighted.precision)),
        ("weighted_f_measure", repr(pc.weighted.f_measure)),
        ("weighted_roc_area", repr(pc.weighted.roc_area)),
    ]
    return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"
