"""Model persistence: versioned JSON artifacts with structural validation.

Loading is defensive: wrong format tags, wrong versions, missing keys,
non-finite numerics, and malformed trees all raise CorruptModel rather than
propagating into predictions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .artifacts import (
    ARTIFACT_VERSION,
    FORMAT_PREFIX,
    atomic_write_text,
    config_hash,
)
from .embedding import EmbeddingModel
from .errors import CorruptModel
from .features import FeatureCategory, category_slots
from .learners import BoostedModel, Leaf, OBJECTIVE_BINARY, Split
from .multiclass import (
    MulticlassModel,
    multiclass_from_dict,
    multiclass_to_dict,
)

MODEL_KIND = "model-bundle"
EMBEDDING_KIND = "embedding"


@dataclass
class ModelBundle:
    """Everything predict needs: the fitted framework plus the feature
    projection it was trained under."""

    category: FeatureCategory
    model: MulticlassModel
    class_labels: tuple[str, ...]
    seed: int
    config_digest: str


def _dump(kind: str, payload: dict[str, Any]) -> str:
    body: dict[str, Any] = {
        "format": f"{FORMAT_PREFIX}/{kind}",
        "version": ARTIFACT_VERSION,
    }
    body.update(payload)
    return json.dumps(body, indent=2) + "\n"


def _load(path: str, kind: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"{path}: unreadable artifact: {exc}") from None
    if not isinstance(obj, dict):
        raise CorruptModel(f"{path}: artifact is not a JSON object")
    expected = f"{FORMAT_PREFIX}/{kind}"
    if obj.get("format") != expected:
        raise CorruptModel(
            f"{path}: format {obj.get('format')!r}, expected {expected!r}"
        )
    if obj.get("version") != ARTIFACT_VERSION:
        raise CorruptModel(
            f"{path}: version {obj.get('version')!r}, expected {ARTIFACT_VERSION}"
        )
    return obj


def _validate_tree(node: Any) -> None:
    if isinstance(node, Leaf):
        if not math.isfinite(node.value):
            raise CorruptModel("non-finite leaf value")
        return
    if isinstance(node, Split):
        if not math.isfinite(node.threshold):
            raise CorruptModel("non-finite split threshold")
        if node.feature_index < 0:
            raise CorruptModel("negative feature index")
        _validate_tree(node.left)
        _validate_tree(node.right)
        return
    raise CorruptModel("unknown tree node type")


def _validate_learner(learner: BoostedModel) -> None:
    bases = (
        [learner.base_score]
        if learner.objective == OBJECTIVE_BINARY
        else list(learner.base_score)
    )
    if not all(math.isfinite(float(b)) for b in bases):
        raise CorruptModel("non-finite base score")
    if learner.objective == OBJECTIVE_BINARY:
        for tree in learner.trees:
            _validate_tree(tree)
    else:
        for rnd in learner.trees:
            if len(rnd) != learner.n_classes:
                raise CorruptModel("softmax round width != n_classes")
            for tree in rnd:
                _validate_tree(tree)


def _validate_multiclass(model: MulticlassModel) -> None:
    expected = {
        "single": 1,
        "ova": model.n_classes,
        "ovo": model.n_classes * (model.n_classes - 1) // 2,
    }[model.framework.value]
    if len(model.learners) != expected:
        raise CorruptModel(
            f"{model.framework.value} bundle has {len(model.learners)} "
            f"learners, expected {expected}"
        )
    for learner in model.learners.values():
        if learner.n_features != model.n_features:
            raise CorruptModel("learner feature width disagrees with bundle")
        _validate_learner(learner)


def save_model(bundle: ModelBundle, path: str) -> None:
    payload = {
        "category": bundle.category.value,
        "class_labels": list(bundle.class_labels),
        "seed": bundle.seed,
        "config": bundle.config_digest,
        "model": multiclass_to_dict(bundle.model),
    }
    atomic_write_text(path, _dump(MODEL_KIND, payload))


def load_model(path: str) -> ModelBundle:
    obj = _load(path, MODEL_KIND)
    try:
        category = FeatureCategory(obj["category"])
        model = multiclass_from_dict(obj["model"])
        bundle = ModelBundle(
            category=category,
            model=model,
            class_labels=tuple(str(c) for c in obj["class_labels"]),
            seed=int(obj["seed"]),
            config_digest=str(obj["config"]),
        )
    except CorruptModel:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"{path}: bad bundle structure: {exc}") from None
    _validate_multiclass(bundle.model)
    if bundle.model.n_features != len(category_slots(category)):
        raise CorruptModel(
            f"{path}: model width {bundle.model.n_features} does not match "
            f"category {category.value}"
        )
    return bundle


def save_embedding(model: EmbeddingModel, path: str) -> None:
    payload = model.to_dict()
    payload["config"] = config_hash(
        {"params": model.params.to_dict(), "seed": model.seed}
    )
    atomic_write_text(path, _dump(EMBEDDING_KIND, payload))


def load_embedding(path: str) -> EmbeddingModel:
    obj = _load(path, EMBEDDING_KIND)
    try:
        model = EmbeddingModel.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"{path}: bad embedding structure: {exc}") from None
    if len(model.vocab.tokens) != len(set(model.vocab.tokens)):
        raise CorruptModel(f"{path}: duplicate vocabulary tokens")
    for name, arr in (("vectors_in", model.vectors_in), ("vectors_out", model.vectors_out)):
        if not np.isfinite(arr).all():
            raise CorruptModel(f"{path}: non-finite values in {name}")
    return model
