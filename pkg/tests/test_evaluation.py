"""Cross-validation machinery and Weka-style reporting: fold dealing,
pooled metrics, ROC areas, number formatting, report text."""

import math
import random

import pytest

from nomkit import (
    DataError,
    Dataset,
    Evaluation,
    FoldPlan,
    TreeParams,
    UsageError,
    class_priors,
    cross_validate,
    dts,
    evaluate_training,
    format_report,
    machine_summary,
    per_class_metrics,
    roc_auc,
    stratified_folds,
    summary_metrics,
)
from oracles import auc_by_pairs, toy

KAPPA_GOLDEN_CONFUSION = 0.5713626931058334  # from [[523,26],[143,199]]


def make_eval(confusion, class_names=("No", "Yes"), priors=None):
    """Evaluation with one-hot predictions realizing a confusion matrix."""
    k = len(class_names)
    n = sum(sum(r) for r in confusion)
    if priors is None:
        row = [sum(confusion[c]) for c in range(k)]
        priors = tuple(r / n for r in row)
    actual, predicted, dists = [], [], []
    for a in range(k):
        for p in range(k):
            for _ in range(confusion[a][p]):
                actual.append(a)
                predicted.append(p)
                dists.append(tuple(1.0 if c == p else 0.0
                                   for c in range(k)))
    return Evaluation(
        class_names=tuple(class_names),
        actual=tuple(actual),
        predicted=tuple(predicted),
        predicted_dist=tuple(dists),
        baseline_prior=tuple(tuple(priors) for _ in range(n)),
    )


class TestStratifiedFolds:
    def test_titanic_fold_sizes(self, titanic):
        plan = stratified_folds(titanic, 10, seed=1)
        sizes = sorted(len(plan.test_indices(f)) for f in range(10))
        assert sizes == [89] * 9 + [90]

    def test_titanic_class_balance(self, titanic):
        plan = stratified_folds(titanic, 10, seed=3)
        target = titanic.target_index
        per_fold_no = []
        per_fold_yes = []
        for f in range(10):
            rows = [titanic.instances[i][target]
                    for i in plan.test_indices(f)]
            per_fold_no.append(rows.count(0))
            per_fold_yes.append(rows.count(1))
        assert sorted(per_fold_no) == [54] + [55] * 9
        assert sorted(per_fold_yes) == [34] * 8 + [35] * 2

    def test_folds_partition_everything(self, titanic):
        plan = stratified_folds(titanic, 10, seed=7)
        seen = []
        for f in range(10):
            seen.extend(plan.test_indices(f))
        assert sorted(seen) == list(range(891))

    def test_train_test_complement(self, titanic):
        plan = stratified_folds(titanic, 10, seed=7)
        test = set(plan.test_indices(4))
        train = set(plan.train_indices(4))
        assert test.isdisjoint(train)
        assert test | train == set(range(891))

    def test_same_seed_same_plan(self, titanic):
        a = stratified_folds(titanic, 10, seed=5)
        b = stratified_folds(titanic, 10, seed=5)
        assert a == b

    def test_different_seed_different_plan(self, titanic):
        a = stratified_folds(titanic, 10, seed=5)
        b = stratified_folds(titanic, 10, seed=6)
        assert a.assignment != b.assignment

    def test_leave_one_out(self):
        d = toy([(0, 0)] * 6 + [(1, 1)] * 6, [2])
        plan = stratified_folds(d, 12, seed=1)
        assert sorted(len(plan.test_indices(f)) for f in range(12)) == [1] * 12

    def test_k_bounds(self, titanic):
        with pytest.raises(UsageError):
            stratified_folds(titanic, 1, seed=1)
        with pytest.raises(UsageError):
            stratified_folds(titanic, 892, seed=1)

    def test_no_target(self, titanic):
        bare = Dataset(titanic.relation, titanic.attributes,
                       titanic.instances, None)
        with pytest.raises(UsageError):
            stratified_folds(bare, 10, seed=1)

    def test_missing_class_value(self):
        d = toy([(0, 0), (0, None), (1, 1), (1, 1)], [2])
        with pytest.raises(DataError):
            stratified_folds(d, 2, seed=1)

    def test_unused_declared_class(self):
        d = toy([(0, 0), (0, 0), (1, 0), (1, 0)], [2],
                class_values=("n", "y"))
        with pytest.raises(UsageError, match="'y'"):
            stratified_folds(d, 2, seed=1)

    def test_fold_plan_validation(self):
        with pytest.raises(UsageError):
            FoldPlan(1, 0, (0,))
        with pytest.raises(UsageError):
            FoldPlan(2, 0, (0, 2))


class TestClassPriors:
    def test_full_data(self, titanic):
        p = class_priors(titanic)
        assert p == pytest.approx((549 / 891, 342 / 891))

    def test_subset(self, titanic):
        target = titanic.target_index
        yes_rows = [i for i, r in enumerate(titanic.instances)
                    if r[target] == 1]
        assert class_priors(titanic, yes_rows) == pytest.approx((0.0, 1.0))


class TestEvaluationContainer:
    def test_confusion_and_correct(self):
        ev = make_eval([[3, 1], [2, 4]])
        assert ev.confusion == ((3, 1), (2, 4))
        assert ev.correct == 7
        assert ev.num_instances == 10

    def test_length_mismatch(self):
        with pytest.raises(UsageError):
            Evaluation(("a", "b"), (0,), (0, 1), ((1.0, 0.0),),
                       ((0.5, 0.5),))

    def test_distribution_must_sum_to_one(self):
        with pytest.raises(UsageError):
            Evaluation(("a", "b"), (0,), (0,), ((0.7, 0.2),),
                       ((0.5, 0.5),))


class TestSummaryMetrics:
    def test_golden_confusion_kappa(self):
        s = summary_metrics(make_eval([[523, 26], [143, 199]]))
        assert s["accuracy"] == pytest.approx(722 / 891, abs=1e-12)
        assert s["kappa"] == pytest.approx(KAPPA_GOLDEN_CONFUSION, abs=1e-12)

    def test_constant_predictor_kappa_zero(self):
        s = summary_metrics(make_eval([[60, 0], [40, 0]]))
        assert s["kappa"] == pytest.approx(0.0, abs=1e-12)
        assert s["accuracy"] == pytest.approx(0.6)

    def test_perfect_predictor(self):
        s = summary_metrics(make_eval([[5, 0], [0, 5]]))
        assert s["kappa"] == pytest.approx(1.0)
        assert s["mae"] == 0.0
        assert s["rmse"] == 0.0
        assert s["rae"] == 0.0

    def test_one_hot_mae_is_error_rate(self):
        # |p - t| sums to 2 on a miss and 0 on a hit, and the per-class
        # divisor is 2, so the mean equals the miss rate
        ev = make_eval([[523, 26], [143, 199]])
        s = summary_metrics(ev)
        assert s["mae"] == pytest.approx(169 / 891, abs=1e-12)
        assert s["rmse"] == pytest.approx(math.sqrt(169 / 891), abs=1e-12)

    def test_relative_errors_against_inline_recompute(self):
        ev = make_eval([[523, 26], [143, 199]])
        s = summary_metrics(ev)
        n, k = 891, 2
        base_abs = base_sq = 0.0
        for a, prior in zip(ev.actual, ev.baseline_prior):
            for c in range(k):
                t = 1.0 if c == a else 0.0
                base_abs += abs(prior[c] - t)
                base_sq += (prior[c] - t) ** 2
        assert s["rae"] == pytest.approx(
            s["mae"] / (base_abs / (n * k)), abs=1e-12)
        assert s["rrse"] == pytest.approx(
            s["rmse"] / math.sqrt(base_sq / (n * k)), abs=1e-12)

    def test_baseline_predictor_scores_hundred_percent(self):
        # predicting exactly the prior makes the relative errors 1
        prior = (0.7, 0.3)
        n = 10
        actual = (0,) * 7 + (1,) * 3
        ev = Evaluation(("a", "b"), actual, (0,) * n,
                        tuple(prior for _ in range(n)),
                        tuple(prior for _ in range(n)))
        s = summary_metrics(ev)
        assert s["rae"] == pytest.approx(1.0, abs=1e-12)
        assert s["rrse"] == pytest.approx(1.0, abs=1e-12)

    def test_empty_evaluation(self):
        ev = Evaluation(("a", "b"), (), (), (), ())
        with pytest.raises(UsageError):
            summary_metrics(ev)

    def test_zero_baseline_rejected(self):
        ev = Evaluation(("a", "b"), (0,), (0,), ((1.0, 0.0),),
                        ((1.0, 0.0),))
        with pytest.raises(UsageError):
            summary_metrics(ev)


class TestRocAuc:
    def test_spec_example(self):
        assert roc_auc([0.9, 0.4, 0.6], [True, False, True]) == 1.0

    def test_perfectly_wrong(self):
        assert roc_auc([0.1, 0.9], [True, False]) == 0.0

    def test_all_tied_is_half(self):
        assert roc_auc([0.5] * 6, [True, False] * 3) == 0.5

    def test_single_class_rejected(self):
        with pytest.raises(UsageError):
            roc_auc([0.1, 0.9], [True, True])

    def test_length_mismatch(self):
        with pytest.raises(UsageError):
            roc_auc([0.1], [True, False])

    def test_matches_pair_counting(self):
        rng = random.Random(90)
        for _ in range(120):
            n = rng.randint(2, 40)
            scores = [rng.choice([0.0, 0.25, 0.5, rng.random()])
                      for _ in range(n)]
            labels = [rng.random() < 0.5 for _ in range(n)]
            if not (any(labels) and not all(labels)):
                continue
            assert roc_auc(scores, labels) == pytest.approx(
                auc_by_pairs(scores, labels), abs=1e-12)

    def test_monotone_transform_invariance(self):
        rng = random.Random(91)
        scores = [rng.random() for _ in range(30)]
        labels = [rng.random() < 0.4 for _ in range(30)]
        base = roc_auc(scores, labels)
        assert roc_auc([2 * s + 1 for s in scores], labels) == base
        assert roc_auc([math.exp(s) for s in scores], labels) == \
            pytest.approx(base, abs=1e-12)


class TestPerClassMetrics:
    def test_weighted_average_recompute(self):
        ev = make_eval([[523, 26], [143, 199]])
        pc = per_class_metrics(ev)
        for name in ("tp_rate", "precision", "f_measure"):
            expected = (549 * getattr(pc.classes[0], name)
                        + 342 * getattr(pc.classes[1], name)) / 891
            assert getattr(pc.weighted, name) == pytest.approx(expected)

    def test_recall_equals_tp_rate(self):
        pc = per_class_metrics(make_eval([[523, 26], [143, 199]]))
        for m in pc.classes:
            assert m.recall == m.tp_rate

    def test_never_predicted_class_flags_precision(self):
        pc = per_class_metrics(make_eval([[6, 0], [4, 0]]))
        b = pc.classes[1]
        assert b.precision == 0.0
        assert b.undefined == frozenset({"precision", "f_measure"})
        assert pc.classes[0].undefined == frozenset()
        assert pc.weighted.undefined == frozenset({"precision",
                                                   "f_measure"})

    def test_one_hot_roc_area(self):
        # one-hot distributions give a two-level ranking; the rank AUC
        # then has a closed form from the confusion cells
        ev = make_eval([[523, 26], [143, 199]])
        pc = per_class_metrics(ev)
        scores = [d[0] for d in ev.predicted_dist]
        labels = [a == 0 for a in ev.actual]
        assert pc.classes[0].roc_area == pytest.approx(
            auc_by_pairs(scores, labels), abs=1e-12)

    def test_three_class_weighting(self):
        ev = make_eval([[4, 1, 0], [0, 3, 2], [1, 0, 5]],
                       class_names=("a", "b", "c"))
        pc = per_class_metrics(ev)
        assert len(pc.classes) == 3
        expected = (5 * pc.classes[0].tp_rate + 5 * pc.classes[1].tp_rate
                    + 6 * pc.classes[2].tp_rate) / 16
        assert pc.weighted.tp_rate == pytest.approx(expected)


class TestCrossValidate:
    def test_titanic_row_sums_any_seed(self, titanic):
        ev = cross_validate(titanic, TreeParams(), k=10, seed=4)
        assert [sum(r) for r in ev.confusion] == [549, 342]
        assert ev.class_names == ("No", "Yes")

    def test_threads_match_sequential(self, titanic):
        seq = cross_validate(titanic, TreeParams(), k=10, seed=10)
        par = cross_validate(titanic, TreeParams(), k=10, seed=10,
                             threads=4)
        assert seq == par

    def test_seed_ten_golden_confusion(self, titanic):
        ev = cross_validate(titanic, TreeParams(), k=10, seed=10)
        assert ev.confusion == ((523, 26), (143, 199))

    def test_training_evaluation_correct_count(self, titanic):
        ev = evaluate_training(titanic)
        assert [sum(r) for r in ev.confusion] == [549, 342]
        assert ev.correct == 726


class TestDts:
    @pytest.mark.parametrize("value,decimals,expected", [
        (81.03254769921436, 4, "81.0325"),
        (0.5713626931058334, 4, "0.5714"),
        (0.2910, 4, "0.291"),
        (1.0, 4, "1"),
        (0.9530054644808743, 3, "0.953"),
        (0.5, 2, "0.5"),
        (-0.00004, 3, "0"),
        (722.0, 4, "722"),
        (61.52930568198914, 4, "61.5293"),
    ])
    def test_values(self, value, decimals, expected):
        assert dts(value, decimals) == expected


class TestFormatReport:
    @pytest.fixture()
    def report(self, titanic):
        from nomkit import build_tree, print_tree

        ev = cross_validate(titanic, TreeParams(), k=10, seed=10)
        tree = build_tree(titanic)
        return format_report(
            ev, titanic, TreeParams(), print_tree(tree, titanic),
            test_mode="10-fold cross-validation")

    def test_run_information(self, report, titanic):
        assert "=== Run information ===" in report
        assert "Instances:    891" in report
        assert "Attributes:   5" in report
        for spec in titanic.attributes:
            assert f"              {spec.name}" in report

    def test_summary_lines(self, report):
        def line(label, value):
            return f"{label:<35}{value:>12}"

        assert (line("Correctly Classified Instances", "722")
                + f"     {'81.0325':>12} %") in report
        assert (line("Incorrectly Classified Instances", "169")
                + f"     {'18.9675':>12} %") in report
        assert line("Kappa statistic", "0.5714") in report
        assert line("Mean absolute error", "0.291") in report
        assert line("Relative absolute error", "61.5293") + " %" in report
        assert line("Total Number of Instances", "891") in report

    def test_stratified_heading(self, report):
        assert "=== Stratified cross-validation ===" in report

    def test_training_heading(self, titanic):
        from nomkit import build_tree, print_tree

        ev = evaluate_training(titanic)
        text = format_report(ev, titanic, TreeParams(),
                             print_tree(build_tree(titanic), titanic),
                             test_mode="evaluate on training data")
        assert "=== Evaluation on training set ===" in text
        assert "=== Stratified cross-validation ===" not in text

    def test_confusion_matrix_block(self, report):
        assert "=== Confusion Matrix ===" in report
        assert "a   b   <-- classified as" in report
        assert "523  26 |   a = No" in report
        assert "143 199 |   b = Yes" in report

    def test_per_class_block(self, report):
        assert ("=== Detailed Accuracy By Class ===") in report
        assert "Weighted Avg." in report
        assert " No" in report and " Yes" in report

    def test_timings_optional(self, report, titanic):
        from nomkit import build_tree, print_tree

        ev = cross_validate(titanic, TreeParams(), k=10, seed=10)
        tree_text = print_tree(build_tree(titanic), titanic)
        timed = format_report(ev, titanic, TreeParams(), tree_text,
                              test_mode="10-fold cross-validation",
                              timings={"build model": 0.07})
        assert "Time taken to build model: 0.07 seconds" in timed
        assert "Time taken" not in report

    def test_byte_stable(self, titanic, report):
        from nomkit import build_tree, print_tree

        ev = cross_validate(titanic, TreeParams(), k=10, seed=10)
        again = format_report(
            ev, titanic, TreeParams(),
            print_tree(build_tree(titanic), titanic),
            test_mode="10-fold cross-validation")
        assert again == report


class TestMachineSummary:
    def test_parseable_and_consistent(self, titanic):
        ev = cross_validate(titanic, TreeParams(), k=10, seed=10)
        text = machine_summary(ev)
        pairs = dict(line.split("=", 1)
                     for line in text.strip().split("\n"))
        assert pairs["instances"] == "891"
        assert pairs["correct"] == "722"
        assert float(pairs["accuracy"]) == pytest.approx(722 / 891)
        s = summary_metrics(ev)
        assert float(pairs["kappa"]) == s["kappa"]
        assert float(pairs["rae"]) == s["rae"]
