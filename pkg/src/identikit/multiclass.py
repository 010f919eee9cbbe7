"""Identity classes and the three multiclass frameworks over boosted learners.

Class indices are fixed and double as the deterministic tie-break order:
0 organization, 1 organization_affiliated, 2 non_affiliated, 3 none.

Frameworks:
  single: one softmax ensemble, predict by argmax probability.
  ova:    K binary learners (class k vs rest), argmax of positive scores.
  ovo:    K(K-1)/2 pairwise learners, i < j with i as the positive label;
          each votes i when p(i) >= 0.5, else j. Majority wins; vote ties go
          to the larger summed pairwise probability mass; exact mass ties go
          to the lower class index. Reported scores are votes / n_pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from itertools import combinations
from typing import Any

import numpy as np

from .errors import MissingClass, SchemaMismatch
from .learners import (
    BoostedModel,
    GBDTParams,
    fit_gbdt_binary,
    fit_gbdt_softmax,
    model_from_dict,
    model_to_dict,
    predict_proba,
)


class IdentityClass(IntEnum):
    ORGANIZATION = 0
    ORGANIZATION_AFFILIATED = 1
    NON_AFFILIATED = 2
    NONE = 3


CLASS_LABELS: tuple[str, ...] = (
    "organization",
    "organization_affiliated",
    "non_affiliated",
    "none",
)

N_CLASSES = len(CLASS_LABELS)

_LABEL_TO_CLASS = {label: i for i, label in enumerate(CLASS_LABELS)}


def class_of_label(label: str) -> int:
    try:
        return _LABEL_TO_CLASS[label]
    except KeyError:
        raise ValueError(f"unknown class label {label!r}") from None


class Framework(str, Enum):
    SINGLE = "single"
    OVA = "ova"
    OVO = "ovo"


def _pairs(n_classes: int) -> list[tuple[int, int]]:
    return list(combinations(range(n_classes), 2))


def framework_learner_count(framework: Framework | str, n_classes: int) -> int:
    framework = Framework(framework)
    if framework is Framework.SINGLE:
        return 1
    if framework is Framework.OVA:
        return n_classes
    return n_classes * (n_classes - 1) // 2


@dataclass
class MulticlassModel:
    framework: Framework
    n_classes: int
    n_features: int
    seed: int
    learners: dict[str, BoostedModel]

    @property
    def n_learners(self) -> int:
        return len(self.learners)


def _learner_key(framework: Framework, item: Any) -> str:
    if framework is Framework.SINGLE:
        return "softmax"
    if framework is Framework.OVA:
        return f"class_{item}"
    i, j = item
    return f"pair_{i}_{j}"


def train_framework(
    framework: Framework | str,
    X: np.ndarray,
    y: np.ndarray,
    params: GBDTParams = GBDTParams(),
    seed: int = 0,
    n_classes: int = N_CLASSES,
) -> MulticlassModel:
    """Fit one framework on already-projected features.

    Every class in [0, n_classes) needs at least one example; pairwise and
    one-vs-all decompositions are undefined otherwise.
    """
    framework = Framework(framework)
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    counts = np.bincount(y, minlength=n_classes) if y.size else np.zeros(n_classes, int)
    for k in range(n_classes):
        if counts[k] == 0:
            raise MissingClass(k)
    if y.size and int(y.max()) >= n_classes:
        raise ValueError(f"label {int(y.max())} outside [0, {n_classes})")

    learners: dict[str, BoostedModel] = {}
    if framework is Framework.SINGLE:
        learners["softmax"] = fit_gbdt_softmax(
            X, y, params, seed=seed, n_classes=n_classes
        )
    elif framework is Framework.OVA:
        for k in range(n_classes):
            yk = (y == k).astype(np.int64)
            learners[_learner_key(framework, k)] = fit_gbdt_binary(
                X, yk, params, seed=seed
            )
    else:
        for i, j in _pairs(n_classes):
            rows = np.flatnonzero((y == i) | (y == j))
            ybin = (y[rows] == i).astype(np.int64)
            learners[_learner_key(framework, (i, j))] = fit_gbdt_binary(
                X[rows], ybin, params, seed=seed
            )
    return MulticlassModel(
        framework=framework,
        n_classes=n_classes,
        n_features=X.shape[1],
        seed=seed,
        learners=learners,
    )


def _check_batch(model: MulticlassModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise SchemaMismatch(
            f"model expects {model.n_features} features, got shape {X.shape}"
        )
    return X


def _ovo_tables(
    model: MulticlassModel, X: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(votes, mass) matrices, both (n, K), accumulated in canonical pair
    order so mass sums are reproducible to the bit."""
    n = X.shape[0]
    K = model.n_classes
    votes = np.zeros((n, K), dtype=np.int64)
    mass = np.zeros((n, K), dtype=np.float64)
    for i, j in _pairs(K):
        learner = model.learners[_learner_key(Framework.OVO, (i, j))]
        p = np.asarray(predict_proba(learner, X), dtype=np.float64)
        wins_i = p >= 0.5
        votes[wins_i, i] += 1
        votes[~wins_i, j] += 1
        mass[:, i] += p
        mass[:, j] += 1.0 - p
    return votes, mass


def predict_batch(
    model: MulticlassModel, X: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(classes, scores) for a feature matrix.

    classes is (n,) int; scores is (n, K): probabilities for single/ova,
    normalized vote shares for ovo.
    """
    X = _check_batch(model, X)
    K = model.n_classes
    if model.framework is Framework.SINGLE:
        probs = predict_proba(model.learners["softmax"], X)
        # argmax takes the first maximum: exact ties resolve by class order.
        return probs.argmax(axis=1), probs
    if model.framework is Framework.OVA:
        scores = np.empty((X.shape[0], K), dtype=np.float64)
        for k in range(K):
            learner = model.learners[_learner_key(Framework.OVA, k)]
            scores[:, k] = predict_proba(learner, X)
        return scores.argmax(axis=1), scores
    votes, mass = _ovo_tables(model, X)
    n_pairs = K * (K - 1) // 2
    classes = np.empty(X.shape[0], dtype=np.int64)
    for r in range(X.shape[0]):
        row_votes = votes[r]
        tied = np.flatnonzero(row_votes == row_votes.max())
        if tied.size == 1:
            classes[r] = tied[0]
        else:
            # argmax over the tied subset: first maximum breaks exact mass
            # ties toward the lower class index.
            classes[r] = tied[int(np.argmax(mass[r, tied]))]
    return classes, votes / float(n_pairs)


def predict(model: MulticlassModel, x: np.ndarray) -> tuple[IdentityClass, np.ndarray]:
    """Single-vector convenience wrapper around predict_batch."""
    classes, scores = predict_batch(model, np.asarray(x, dtype=np.float64))
    index = int(classes[0])
    cls = IdentityClass(index) if model.n_classes == N_CLASSES else index
    return cls, scores[0]


def predict_classes(model: MulticlassModel, X: np.ndarray) -> np.ndarray:
    classes, _ = predict_batch(model, X)
    return classes


def multiclass_to_dict(model: MulticlassModel) -> dict[str, Any]:
    return {
        "framework": model.framework.value,
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "seed": model.seed,
        "learners": {
            key: model_to_dict(learner) for key, learner in model.learners.items()
        },
    }


def multiclass_from_dict(d: dict[str, Any]) -> MulticlassModel:
    return MulticlassModel(
        framework=Framework(d["framework"]),
        n_classes=int(d["n_classes"]),
        n_features=int(d["n_features"]),
        seed=int(d["seed"]),
        learners={
            key: model_from_dict(sub) for key, sub in d["learners"].items()
        },
    )
