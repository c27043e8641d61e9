"""Stratified folds, nested cross-validation, metrics, and agreement.

The outer folds estimate generalization; the inner folds (training data
only) select hyperparameters by mean macro F1.  Feature models are refitted
inside every fold, and their fingerprints are recorded so leakage from test
quotes is detectable and fatal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classifiers import (
    CnbModel,
    LinearModel,
    cnb_predict_many,
    compute_class_weights,
    svm_predict_many,
    train_cnb,
    train_linear_svm,
)
from .errors import ConfigurationError, LeakageError
from .features import (
    FittedFeatures,
    LexiconModel,
    PreparedQuote,
    fit_features,
    normalize_feature_sets,
)

DEFAULT_GRID_C = (0.01, 0.1, 1.0, 10.0, 100.0)
DEFAULT_GRID_ALPHA = (0.1, 0.5, 1.0, 2.0)


@dataclass(frozen=True)
class HyperGrid:
    svm_c: tuple[float, ...] = DEFAULT_GRID_C
    cnb_alpha: tuple[float, ...] = DEFAULT_GRID_ALPHA

    def __post_init__(self) -> None:
        for name, values in (("svm_c", self.svm_c), ("cnb_alpha", self.cnb_alpha)):
            if not values or any(v <= 0 for v in values):
                raise ConfigurationError(f"{name} grid must be non-empty and positive")

    def candidates(self, model_kind: str) -> tuple[float, ...]:
        values = self.svm_c if model_kind == "svm" else self.cnb_alpha
        return tuple(sorted(values))


# ---------------------------------------------------------------------------
# Stratified folds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    folds: tuple[tuple[int, ...], ...]  # positions into the label sequence


def stratified_kfold(labels: Sequence[str], k: int, seed: int) -> FoldPlan:
    """Per-class seeded shuffle, then a single round-robin deal across folds.

    The dealing cursor continues from one class to the next, which keeps
    fold sizes balanced to within one sample while preserving per-class
    proportions to within one sample per fold.  Every class needs at least
    k - 1 samples so that no fold misses more than one sample of any class.
    """
    if k < 2:
        raise ConfigurationError("fold count must be at least 2")
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    for label, members in sorted(by_class.items()):
        if len(members) < k - 1:
            raise ConfigurationError(
                f"class {label!r} has {len(members)} samples, too few for k={k}"
            )
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    cursor = 0
    for label in sorted(by_class):
        members = by_class[label]
        order = rng.permutation(len(members))
        for pos in order:
            folds[cursor % k].append(members[pos])
            cursor += 1
    return FoldPlan(k=k, seed=seed, folds=tuple(tuple(sorted(f)) for f in folds))


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsBlock:
    per_class: tuple[ClassMetrics, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    n: int

    def to_dict(self) -> dict:
        return {
            "per_class": [
                {
                    "label": m.label,
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for m in self.per_class
            ],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "n": self.n,
        }


def prf_metrics(
    gold: Sequence[str], predicted: Sequence[str], class_order: Sequence[str]
) -> MetricsBlock:
    """Per-class precision/recall/F1 plus unweighted macro averages."""
    if len(gold) != len(predicted):
        raise ConfigurationError("gold and predicted label counts differ")
    known = set(class_order)
    for label in list(gold) + list(predicted):
        if label not in known:
            raise ConfigurationError(f"label {label!r} not in declared class order")
    per_class = []
    for cls in class_order:
        tp = sum(1 for g, p in zip(gold, predicted) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold, predicted) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold, predicted) if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class.append(
            ClassMetrics(label=cls, precision=precision, recall=recall, f1=f1, support=tp + fn)
        )
    k = len(per_class)
    return MetricsBlock(
        per_class=tuple(per_class),
        macro_precision=sum(m.precision for m in per_class) / k,
        macro_recall=sum(m.recall for m in per_class) / k,
        macro_f1=sum(m.f1 for m in per_class) / k,
        n=len(gold),
    )


def majority_baseline(gold: Sequence[str], class_order: Sequence[str]) -> MetricsBlock:
    """Metrics of the trivial always-majority predictor."""
    if not gold:
        raise ConfigurationError("cannot compute a baseline on empty gold labels")
    counts = {cls: 0 for cls in class_order}
    for label in gold:
        counts[label] = counts.get(label, 0) + 1
    majority = max(class_order, key=lambda cls: counts.get(cls, 0))
    return prf_metrics(gold, [majority] * len(gold), class_order)


def cohens_kappa(rater_a: Sequence[str], rater_b: Sequence[str]) -> float:
    """Chance-corrected agreement between two label sequences."""
    if len(rater_a) != len(rater_b):
        raise ConfigurationError("rater label sequences differ in length")
    if not rater_a:
        raise ConfigurationError("cannot compute kappa on empty sequences")
    n = len(rater_a)
    observed = sum(1 for a, b in zip(rater_a, rater_b) if a == b) / n
    labels = set(rater_a) | set(rater_b)
    expected = 0.0
    for label in labels:
        pa = sum(1 for a in rater_a if a == label) / n
        pb = sum(1 for b in rater_b if b == label) / n
        expected += pa * pb
    if expected == 1.0:
        return 1.0
    return (observed - expected) / (1.0 - expected)


# ---------------------------------------------------------------------------
# Nested cross-validation
# ---------------------------------------------------------------------------


def ensure_no_leakage(fitted: FittedFeatures, train_ids: Iterable[int]) -> None:
    """Fail hard if a feature bundle was fitted on anything but the given fold."""
    expected = tuple(sorted(train_ids))
    if tuple(fitted.fitted_on) != expected:
        raise LeakageError(
            "feature models were fitted on quote ids outside the training fold"
        )


def fit_and_train(
    prepared: Sequence[PreparedQuote],
    labels: Sequence[str],
    *,
    model_kind: str,
    hyper: float,
    feature_sets: Sequence[str],
    seed: int,
    tfidf_range: tuple[int, int] = (1, 3),
    pos_range: tuple[int, int] = (1, 3),
    lexicon: LexiconModel | None = None,
) -> tuple[FittedFeatures, LinearModel | CnbModel]:
    """Fit feature models and train one classifier on the same quotes."""
    fitted = fit_features(
        prepared, feature_sets, tfidf_range=tfidf_range, pos_range=pos_range, lexicon=lexicon
    )
    X = fitted.transform(prepared)
    if model_kind == "svm":
        weights = compute_class_weights(_label_counts(labels))
        model = train_linear_svm(X, labels, c=hyper, weights=weights, seed=seed)
    elif model_kind == "cnb":
        model = train_cnb(X, labels, alpha=hyper)
    else:
        raise ConfigurationError(f"unknown model kind {model_kind!r}")
    return fitted, model


def _label_counts(labels: Sequence[str]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    return counts


def _predict(model, X) -> list[str]:
    if isinstance(model, LinearModel):
        return svm_predict_many(model, X)
    return cnb_predict_many(model, X)


@dataclass(frozen=True)
class FoldResult:
    fold: int
    chosen_hyper: float
    macro_f1: float
    feature_fingerprint: str
    test_size: int


@dataclass(frozen=True)
class EvalReport:
    task: str
    model_kind: str
    feature_sets: tuple[str, ...]
    seed: int
    outer_k: int
    inner_k: int
    grid: tuple[float, ...]
    class_order: tuple[str, ...]
    pooled: MetricsBlock
    folds: tuple[FoldResult, ...]
    fold_macro_f1_mean: float
    fold_macro_f1_sd: float
    baseline: MetricsBlock

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "model": self.model_kind,
            "feature_sets": list(self.feature_sets),
            "seed": self.seed,
            "outer_k": self.outer_k,
            "inner_k": self.inner_k,
            "grid": list(self.grid),
            "class_order": list(self.class_order),
            "pooled": self.pooled.to_dict(),
            "folds": [
                {
                    "fold": f.fold,
                    "chosen_hyper": f.chosen_hyper,
                    "macro_f1": f.macro_f1,
                    "feature_fingerprint": f.feature_fingerprint,
                    "test_size": f.test_size,
                }
                for f in self.folds
            ],
            "fold_macro_f1_mean": self.fold_macro_f1_mean,
            "fold_macro_f1_sd": self.fold_macro_f1_sd,
            "baseline": self.baseline.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        """Aligned text table: per-class rows, macro average, baseline."""
        headers = ("Label", "Precision", "Recall", "F1", "Support")
        rows = []
        for m in self.pooled.per_class:
            rows.append((m.label, f"{m.precision:.4f}", f"{m.recall:.4f}", f"{m.f1:.4f}", str(m.support)))
        rows.append(
            (
                "Average/Total",
                f"{self.pooled.macro_precision:.4f}",
                f"{self.pooled.macro_recall:.4f}",
                f"{self.pooled.macro_f1:.4f}",
                str(self.pooled.n),
            )
        )
        rows.append(
            (
                "Baseline",
                f"{self.baseline.macro_precision:.4f}",
                f"{self.baseline.macro_recall:.4f}",
                f"{self.baseline.macro_f1:.4f}",
                str(self.baseline.n),
            )
        )
        widths = [max(len(headers[i]), *(len(r[i]) for r in rows)) for i in range(len(headers))]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
        for r in rows:
            lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(headers))))
        lines.append(
            f"fold macro F1: {self.fold_macro_f1_mean:.4f} +/- {self.fold_macro_f1_sd:.4f}"
        )
        return "\n".join(lines)


def nested_cv(
    prepared: Sequence[PreparedQuote],
    labels: Sequence[str],
    *,
    task: str,
    model_kind: str,
    feature_sets: Sequence[str],
    grid: HyperGrid | None = None,
    outer_k: int = 5,
    inner_k: int = 3,
    seed: int = 42,
    tfidf_range: tuple[int, int] = (1, 3),
    pos_range: tuple[int, int] = (1, 3),
    lexicon: LexiconModel | None = None,
) -> EvalReport:
    """Nested stratified cross-validation with inner-loop hyperparameter tuning.

    Inner CV (on the outer-training split only) scores every grid candidate
    by mean macro F1; ties go to the smaller value.  The winner is retrained
    on the whole outer-training split and evaluated on the outer-test fold.
    Pooled outer predictions give the headline metrics; per-fold macro F1 is
    reported as mean +/- sd.
    """
    if len(prepared) != len(labels):
        raise ConfigurationError("prepared quotes and labels differ in length")
    if model_kind not in ("svm", "cnb"):
        raise ConfigurationError(f"unknown model kind {model_kind!r}")
    grid = grid or HyperGrid()
    candidates = grid.candidates(model_kind)
    feature_sets = normalize_feature_sets(feature_sets, lexicon_available=lexicon is not None)
    classes = tuple(sorted(set(labels)))
    n = len(labels)

    outer = stratified_kfold(labels, outer_k, seed)
    pooled_pred: list[str | None] = [None] * n
    fold_results: list[FoldResult] = []

    def run(train_positions: Sequence[int], test_positions: Sequence[int], hyper: float, fold_seed: int):
        train_q = [prepared[i] for i in train_positions]
        train_y = [labels[i] for i in train_positions]
        fitted, model = fit_and_train(
            train_q,
            train_y,
            model_kind=model_kind,
            hyper=hyper,
            feature_sets=feature_sets,
            seed=fold_seed,
            tfidf_range=tfidf_range,
            pos_range=pos_range,
            lexicon=lexicon,
        )
        ensure_no_leakage(fitted, (pq.quote_id for pq in train_q))
        X_test = fitted.transform([prepared[i] for i in test_positions])
        return fitted, _predict(model, X_test)

    for f, test_fold in enumerate(outer.folds):
        test_set = set(test_fold)
        train_positions = [i for i in range(n) if i not in test_set]
        inner_labels = [labels[i] for i in train_positions]
        inner = stratified_kfold(inner_labels, inner_k, seed + f + 1)

        best_hyper = candidates[0]
        best_score = -1.0
        for hyper in candidates:
            scores = []
            for inner_test in inner.folds:
                inner_test_set = set(inner_test)
                itrain = [train_positions[j] for j in range(len(train_positions)) if j not in inner_test_set]
                itest = [train_positions[j] for j in inner_test]
                _, pred = run(itrain, itest, hyper, seed)
                gold = [labels[i] for i in itest]
                scores.append(prf_metrics(gold, pred, classes).macro_f1)
            mean_score = sum(scores) / len(scores)
            if mean_score > best_score:  # strict: ties keep the smaller candidate
                best_score = mean_score
                best_hyper = hyper

        fitted, pred = run(train_positions, list(test_fold), best_hyper, seed)
        for pos, label in zip(test_fold, pred):
            pooled_pred[pos] = label
        fold_gold = [labels[i] for i in test_fold]
        fold_block = prf_metrics(fold_gold, pred, classes)
        fold_results.append(
            FoldResult(
                fold=f,
                chosen_hyper=best_hyper,
                macro_f1=fold_block.macro_f1,
                feature_fingerprint=fitted.fingerprint(),
                test_size=len(test_fold),
            )
        )

    assert all(p is not None for p in pooled_pred)
    pooled = prf_metrics(labels, pooled_pred, classes)
    fold_scores = [fr.macro_f1 for fr in fold_results]
    mean = sum(fold_scores) / len(fold_scores)
    sd = math.sqrt(sum((s - mean) ** 2 for s in fold_scores) / len(fold_scores))
    return EvalReport(
        task=task,
        model_kind=model_kind,
        feature_sets=tuple(feature_sets),
        seed=seed,
        outer_k=outer_k,
        inner_k=inner_k,
        grid=candidates,
        class_order=classes,
        pooled=pooled,
        folds=tuple(fold_results),
        fold_macro_f1_mean=mean,
        fold_macro_f1_sd=sd,
        baseline=majority_baseline(labels, classes),
    )
