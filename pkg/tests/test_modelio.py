"""Persistence round trips and defensive loading of corrupted artifacts."""

import json

import numpy as np
import pytest

from identikit.embedding import (
    SkipgramParams,
    bio_score,
    preprocess_bio,
    train_skipgram,
)
from identikit.errors import CorruptModel
from identikit.features import FeatureCategory
from identikit.learners import GBDTParams
from identikit.modelio import (
    EMBEDDING_KIND,
    MODEL_KIND,
    ModelBundle,
    load_embedding,
    load_model,
    save_embedding,
    save_model,
)
from identikit.multiclass import CLASS_LABELS, predict_batch, train_framework


def make_bundle(framework="ova", seed=3):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 15))
    y = np.repeat(np.arange(4), 15)
    X[:, 0] += 3.0 * y
    model = train_framework(
        framework, X, y, GBDTParams(n_estimators=4), seed=seed
    )
    bundle = ModelBundle(
        category=FeatureCategory.ALL,
        model=model,
        class_labels=CLASS_LABELS,
        seed=seed,
        config_digest="0123456789abcdef",
    )
    return bundle, X


def make_embedding(seed=5):
    corpus = [
        preprocess_bio("relief teams deploying supplies tonight"),
        preprocess_bio("relief supplies moving fast"),
        preprocess_bio("teams deploying fast tonight"),
    ] * 4
    return train_skipgram(corpus, SkipgramParams(dim=8, epochs=2), seed=seed)


class TestModelRoundTrip:
    @pytest.mark.parametrize("framework", ["single", "ova", "ovo"])
    def test_predictions_survive_bit_exactly(self, tmp_path, framework):
        bundle, X = make_bundle(framework)
        path = str(tmp_path / "model.json")
        save_model(bundle, path)
        loaded = load_model(path)
        assert loaded.category is FeatureCategory.ALL
        assert loaded.class_labels == CLASS_LABELS
        assert loaded.seed == bundle.seed
        assert loaded.config_digest == bundle.config_digest
        classes, scores = predict_batch(bundle.model, X)
        classes2, scores2 = predict_batch(loaded.model, X)
        assert np.array_equal(classes, classes2)
        assert np.array_equal(scores, scores2)

    def test_artifact_has_format_and_version(self, tmp_path):
        bundle, _ = make_bundle()
        path = str(tmp_path / "model.json")
        save_model(bundle, path)
        obj = json.loads((tmp_path / "model.json").read_text())
        assert obj["format"].endswith("/" + MODEL_KIND)
        assert "version" in obj


class TestModelCorruption:
    def corrupt(self, tmp_path, mutate):
        bundle, _ = make_bundle()
        path = tmp_path / "model.json"
        save_model(bundle, str(path))
        obj = json.loads(path.read_text())
        mutate(obj)
        path.write_text(json.dumps(obj))
        return str(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorruptModel):
            load_model(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("{ not json")
        with pytest.raises(CorruptModel):
            load_model(str(path))

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(CorruptModel):
            load_model(str(path))

    def test_wrong_format_tag(self, tmp_path):
        path = self.corrupt(tmp_path, lambda o: o.update(format="other/thing"))
        with pytest.raises(CorruptModel, match="format"):
            load_model(path)

    def test_wrong_version(self, tmp_path):
        path = self.corrupt(tmp_path, lambda o: o.update(version="v999"))
        with pytest.raises(CorruptModel, match="version"):
            load_model(path)

    def test_missing_key(self, tmp_path):
        path = self.corrupt(tmp_path, lambda o: o.pop("category"))
        with pytest.raises(CorruptModel):
            load_model(path)

    def test_wrong_learner_count(self, tmp_path):
        def drop_learner(obj):
            learners = obj["model"]["learners"]
            learners.pop(next(iter(learners)))

        path = self.corrupt(tmp_path, drop_learner)
        with pytest.raises(CorruptModel, match="learners"):
            load_model(path)

    def test_non_finite_leaf(self, tmp_path):
        def poison(obj):
            learner = next(iter(obj["model"]["learners"].values()))
            node = learner["trees"][0]
            while "leaf" not in node:
                node = node["left"]
            node["leaf"] = float("nan")

        path = self.corrupt(tmp_path, poison)
        with pytest.raises(CorruptModel, match="leaf"):
            load_model(path)

    def test_category_width_mismatch(self, tmp_path):
        path = self.corrupt(tmp_path, lambda o: o.update(category="social"))
        with pytest.raises(CorruptModel, match="width|category"):
            load_model(path)

    def test_embedding_artifact_rejected_as_model(self, tmp_path):
        path = str(tmp_path / "embedding.json")
        save_embedding(make_embedding(), path)
        with pytest.raises(CorruptModel, match="format"):
            load_model(path)


class TestEmbeddingRoundTrip:
    def test_scores_survive_bit_exactly(self, tmp_path):
        model = make_embedding()
        path = str(tmp_path / "embedding.json")
        save_embedding(model, path)
        loaded = load_embedding(path)
        assert np.array_equal(loaded.vectors_in, model.vectors_in)
        assert np.array_equal(loaded.vectors_out, model.vectors_out)
        assert loaded.vocab.tokens == model.vocab.tokens
        probe = preprocess_bio("relief teams moving tonight")
        assert bio_score(loaded, probe) == bio_score(model, probe)

    def test_artifact_kind(self, tmp_path):
        path = tmp_path / "embedding.json"
        save_embedding(make_embedding(), str(path))
        obj = json.loads(path.read_text())
        assert obj["format"].endswith("/" + EMBEDDING_KIND)


class TestEmbeddingCorruption:
    def corrupt(self, tmp_path, mutate):
        path = tmp_path / "embedding.json"
        save_embedding(make_embedding(), str(path))
        obj = json.loads(path.read_text())
        mutate(obj)
        path.write_text(json.dumps(obj))
        return str(path)

    def test_duplicate_vocab_tokens(self, tmp_path):
        def dup(obj):
            obj["vocab"][1] = obj["vocab"][0]

        path = self.corrupt(tmp_path, dup)
        with pytest.raises(CorruptModel, match="duplicate"):
            load_embedding(path)

    def test_non_finite_vector(self, tmp_path):
        def poison(obj):
            obj["vectors_in"][0] = 1e999  # json inf

        path = self.corrupt(tmp_path, poison)
        with pytest.raises(CorruptModel, match="non-finite"):
            load_embedding(path)

    def test_vector_shape_mismatch(self, tmp_path):
        def shrink(obj):
            obj["vectors_in"] = obj["vectors_in"][:-1]

        path = self.corrupt(tmp_path, shrink)
        with pytest.raises(CorruptModel):
            load_embedding(path)

    def test_model_artifact_rejected_as_embedding(self, tmp_path):
        bundle, _ = make_bundle()
        path = str(tmp_path / "model.json")
        save_model(bundle, path)
        with pytest.raises(CorruptModel, match="format"):
            load_embedding(path)
