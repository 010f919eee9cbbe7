"""Stratified cross-validation, confusion matrices, and F1 metrics.

The headline metric is micro-F1 pooled over the relevant classes {0, 1, 2};
class 3 ("none") is the catch-all and is excluded from that pool. Micro-F1
over all classes equals accuracy by construction and both are reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import (
    EmptyMatrix,
    LabelOutOfRange,
    LengthMismatch,
    TooFewSamples,
)
from .features import FeatureCategory, category_slots
from .learners import GBDTParams
from .multiclass import Framework, N_CLASSES, predict_classes, train_framework

RELEVANT_CLASSES: tuple[int, ...] = (0, 1, 2)


@dataclass(frozen=True)
class FoldAssignment:
    n: int
    n_folds: int
    seed: int
    fold_of: np.ndarray

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)


def stratified_folds(y: np.ndarray, n_folds: int = 10, seed: int = 0) -> FoldAssignment:
    """Deal each class round-robin into folds after a seeded shuffle.

    Each class starts its deal at a seeded offset so fold 0 is not uniformly
    the largest. Per-class fold counts therefore differ by at most one.
    """
    y = np.asarray(y, dtype=np.int64)
    n = y.shape[0]
    if n_folds < 1:
        raise ValueError("n_folds must be positive")
    if n < n_folds:
        raise TooFewSamples(f"{n} samples cannot fill {n_folds} folds")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    for cls in np.unique(y):
        members = np.flatnonzero(y == cls)
        perm = rng.permutation(members)
        offset = int(rng.integers(n_folds))
        fold_of[perm] = (offset + np.arange(members.size)) % n_folds
    return FoldAssignment(n=n, n_folds=n_folds, seed=seed, fold_of=fold_of)


def confusion_matrix(
    y_true: np.ndarray, y_pred: np.ndarray, n_classes: int = N_CLASSES
) -> np.ndarray:
    """(K, K) int64 counts, rows = true class, columns = predicted."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise LengthMismatch("y_true and y_pred must be equal-length 1-D")
    if y_true.size:
        lo = min(int(y_true.min()), int(y_pred.min()))
        hi = max(int(y_true.max()), int(y_pred.max()))
        if lo < 0 or hi >= n_classes:
            raise LabelOutOfRange(f"labels must lie in [0, {n_classes})")
    flat = y_true * n_classes + y_pred
    return np.bincount(flat, minlength=n_classes * n_classes).reshape(
        n_classes, n_classes
    )


@dataclass(frozen=True)
class MetricSet:
    n: int
    accuracy: float
    micro_f1_all: float
    micro_f1_relevant: float
    macro_f1: float
    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    confusion: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "accuracy": self.accuracy,
            "micro_f1_all": self.micro_f1_all,
            "micro_f1_relevant": self.micro_f1_relevant,
            "macro_f1": self.macro_f1,
            "precision": list(self.precision),
            "recall": list(self.recall),
            "f1": list(self.f1),
            "confusion": [list(row) for row in self.confusion],
        }


def _micro_f1(M: np.ndarray, classes: tuple[int, ...]) -> float:
    # Integer sums first; one float division keeps micro_f1_all == accuracy
    # bit-for-bit when the class set covers everything.
    tp = int(sum(M[k, k] for k in classes))
    fp = int(sum(M[:, k].sum() - M[k, k] for k in classes))
    fn = int(sum(M[k, :].sum() - M[k, k] for k in classes))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def metrics_from_confusion(M: np.ndarray) -> MetricSet:
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("confusion matrix must be square")
    if (M < 0).any():
        raise ValueError("confusion matrix counts must be non-negative")
    n = int(M.sum())
    if n == 0:
        raise EmptyMatrix("confusion matrix has no observations")
    K = M.shape[0]
    tp = np.diag(M)
    col = M.sum(axis=0)
    row = M.sum(axis=1)
    precision = [float(tp[k] / col[k]) if col[k] else 0.0 for k in range(K)]
    recall = [float(tp[k] / row[k]) if row[k] else 0.0 for k in range(K)]
    f1 = [
        2 * p * r / (p + r) if (p + r) > 0 else 0.0
        for p, r in zip(precision, recall)
    ]
    relevant = tuple(k for k in RELEVANT_CLASSES if k < K)
    return MetricSet(
        n=n,
        accuracy=int(tp.sum()) / n,
        micro_f1_all=_micro_f1(M, tuple(range(K))),
        micro_f1_relevant=_micro_f1(M, relevant),
        macro_f1=float(np.mean(f1)),
        precision=tuple(precision),
        recall=tuple(recall),
        f1=tuple(f1),
        confusion=tuple(tuple(int(v) for v in row_) for row_ in M),
    )


@dataclass(frozen=True)
class EvalReport:
    framework: str
    category: str
    n_folds: int
    seed: int
    fold_metrics: tuple[MetricSet, ...]
    aggregate: MetricSet
    accuracy_mean: float
    accuracy_std: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "framework": self.framework,
            "category": self.category,
            "n_folds": self.n_folds,
            "seed": self.seed,
            "accuracy_mean": self.accuracy_mean,
            "accuracy_std": self.accuracy_std,
            "aggregate": self.aggregate.to_dict(),
            "folds": [m.to_dict() for m in self.fold_metrics],
        }


def cross_validate(
    framework: Framework | str,
    category: FeatureCategory | str,
    X: np.ndarray,
    y: np.ndarray,
    params: GBDTParams = GBDTParams(),
    n_folds: int = 10,
    seed: int = 0,
    n_classes: int = N_CLASSES,
    fold_features: Callable[[np.ndarray], np.ndarray] | None = None,
) -> EvalReport:
    """Stratified K-fold evaluation of one framework on one feature category.

    X always carries the full schema width; the category projection happens
    here, per fold. fold_features, when given, maps a train-index array to a
    fresh full-width feature matrix (for leakage-free per-fold recomputation
    of corpus-dependent columns); the default reuses X everywhere.

    The aggregate MetricSet is computed on the summed fold confusions;
    accuracy_mean/std summarize the per-fold accuracies (population std).
    """
    framework = Framework(framework)
    category = FeatureCategory(category)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y.shape[0]:
        raise LengthMismatch("X and y row counts differ")
    folds = stratified_folds(y, n_folds=n_folds, seed=seed)
    slots = category_slots(category)
    fold_sets: list[MetricSet] = []
    total = np.zeros((n_classes, n_classes), dtype=np.int64)
    for fold in range(n_folds):
        train_idx = folds.train_indices(fold)
        test_idx = folds.test_indices(fold)
        Xf = fold_features(train_idx) if fold_features is not None else X
        model = train_framework(
            framework,
            Xf[train_idx][:, slots],
            y[train_idx],
            params=params,
            seed=seed,
            n_classes=n_classes,
        )
        preds = predict_classes(model, Xf[test_idx][:, slots])
        M = confusion_matrix(y[test_idx], preds, n_classes=n_classes)
        fold_sets.append(metrics_from_confusion(M))
        total += M
    accuracies = np.array([m.accuracy for m in fold_sets])
    return EvalReport(
        framework=framework.value,
        category=category.value,
        n_folds=n_folds,
        seed=seed,
        fold_metrics=tuple(fold_sets),
        aggregate=metrics_from_confusion(total),
        accuracy_mean=float(accuracies.mean()),
        accuracy_std=float(accuracies.std()),
    )


def format_report_table(reports: list[EvalReport]) -> str:
    """Fixed-width text table over (framework, category) rows."""
    header = (
        f"{'framework':<10} {'features':<16} {'accuracy':>9} "
        f"{'micro_f1_rel':>13} {'macro_f1':>9}"
    )
    lines = [header, "-" * len(header)]
    for rep in reports:
        agg = rep.aggregate
        lines.append(
            f"{rep.framework:<10} {rep.category:<16} {agg.accuracy:>9.4f} "
            f"{agg.micro_f1_relevant:>13.4f} {agg.macro_f1:>9.4f}"
        )
    return "\n".join(lines) + "\n"
