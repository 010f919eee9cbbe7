"""Framework decompositions, voting semantics, and exact tie-break order.

The tie-break tests build zero-tree learners whose constant margins produce
probabilities of exactly 0.5, 1.0, or a value tiny enough to be absorbed by
float rounding, so vote totals and probability masses tie bit-for-bit.
"""

import math
from itertools import combinations

import numpy as np
import pytest

from identikit.errors import MissingClass, SchemaMismatch
from identikit.learners import (
    OBJECTIVE_BINARY,
    BoostedModel,
    GBDTParams,
    predict_proba,
)
from identikit.multiclass import (
    CLASS_LABELS,
    N_CLASSES,
    Framework,
    IdentityClass,
    MulticlassModel,
    class_of_label,
    framework_learner_count,
    multiclass_from_dict,
    multiclass_to_dict,
    predict,
    predict_batch,
    predict_classes,
    train_framework,
)


def blob_fixture(per_class=20, seed=5, n_classes=4):
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 4.0], [4.0, 4.0]])
    centers = centers[:n_classes]
    X = np.concatenate(
        [c + rng.normal(scale=0.3, size=(per_class, 2)) for c in centers]
    )
    y = np.repeat(np.arange(n_classes), per_class)
    return X, y


def const_learner(base_score):
    """Zero-tree binary learner: every probability is sigmoid(base_score)."""
    return BoostedModel(
        objective=OBJECTIVE_BINARY,
        n_classes=2,
        n_features=2,
        base_score=float(base_score),
        params=GBDTParams(n_estimators=0),
        seed=0,
        trees=[],
    )


def ovo_model(bases):
    learners = {
        f"pair_{i}_{j}": const_learner(bases[(i, j)])
        for i, j in combinations(range(4), 2)
    }
    return MulticlassModel(
        framework=Framework.OVO, n_classes=4, n_features=2, seed=0, learners=learners
    )


PROBE = np.zeros((1, 2))


class TestClassOrder:
    def test_labels_and_indices(self):
        assert CLASS_LABELS == (
            "organization",
            "organization_affiliated",
            "non_affiliated",
            "none",
        )
        assert N_CLASSES == 4
        assert IdentityClass.ORGANIZATION == 0
        assert IdentityClass.NONE == 3
        for i, label in enumerate(CLASS_LABELS):
            assert class_of_label(label) == i

    def test_unknown_label_rejected(self):
        with pytest.raises(ValueError):
            class_of_label("celebrity")

    def test_learner_counts(self):
        assert framework_learner_count("single", 4) == 1
        assert framework_learner_count("ova", 4) == 4
        assert framework_learner_count("ovo", 4) == 6
        assert framework_learner_count(Framework.OVO, 3) == 3


class TestDecompositions:
    @pytest.mark.parametrize(
        "framework,count,keys",
        [
            ("single", 1, {"softmax"}),
            ("ova", 4, {"class_0", "class_1", "class_2", "class_3"}),
            (
                "ovo",
                6,
                {f"pair_{i}_{j}" for i, j in combinations(range(4), 2)},
            ),
        ],
    )
    def test_learner_inventory(self, framework, count, keys):
        X, y = blob_fixture(per_class=6)
        model = train_framework(framework, X, y, GBDTParams(n_estimators=2), seed=1)
        assert model.n_learners == count
        assert set(model.learners) == keys

    @pytest.mark.parametrize("framework", ["single", "ova", "ovo"])
    def test_separable_blobs_recovered(self, framework):
        X, y = blob_fixture()
        model = train_framework(framework, X, y, GBDTParams(n_estimators=30), seed=1)
        classes, scores = predict_batch(model, X)
        assert np.mean(classes == y) >= 0.99
        assert scores.shape == (len(y), 4)

    def test_missing_class_rejected(self):
        X, y = blob_fixture(per_class=6, n_classes=3)
        with pytest.raises(MissingClass) as info:
            train_framework("ovo", X, y, GBDTParams(n_estimators=1))
        assert info.value.class_index == 3

    def test_out_of_range_label_rejected(self):
        X, y = blob_fixture(per_class=6)
        y = y.copy()
        y[-1] = 4
        with pytest.raises((ValueError, MissingClass)):
            train_framework("single", X, y, GBDTParams(n_estimators=1))

    def test_wrong_width_rejected(self):
        X, y = blob_fixture(per_class=6)
        model = train_framework("ova", X, y, GBDTParams(n_estimators=1), seed=1)
        with pytest.raises(SchemaMismatch):
            predict_batch(model, np.zeros((2, 7)))


class TestOvoSemantics:
    def test_float_absorption_facts(self):
        # The constructions below rely on these exact float64 identities.
        tiny = 1.0 / (1.0 + math.exp(40.0))
        assert 1.0 / (1.0 + math.exp(-40.0)) == 1.0
        assert tiny > 0.0
        assert 0.5 + tiny == 0.5
        assert 1.0 - tiny == 1.0

    def test_half_probability_votes_first_of_pair(self):
        model = ovo_model({pair: 0.0 for pair in combinations(range(4), 2)})
        classes, scores = predict_batch(model, PROBE)
        assert classes[0] == 0
        assert np.array_equal(scores[0] * 6.0, [3.0, 2.0, 1.0, 0.0])

    def test_vote_totals_always_sum_to_pair_count(self):
        X, y = blob_fixture(per_class=8)
        model = train_framework("ovo", X, y, GBDTParams(n_estimators=5), seed=3)
        _, scores = predict_batch(model, np.random.default_rng(0).normal(size=(25, 2)))
        votes = np.rint(scores * 6.0)
        assert np.all(votes.sum(axis=1) == 6)

    def test_vote_tie_broken_by_probability_mass(self):
        # votes [2, 2, 1, 1]; class 0 holds mass 1.0, class 1 holds 1.5, so
        # the winner is the HIGHER index, proving mass decides before order.
        bases = {pair: 0.0 for pair in combinations(range(4), 2)}
        bases[(0, 3)] = -40.0
        classes, scores = predict_batch(ovo_model(bases), PROBE)
        assert np.array_equal(scores[0] * 6.0, [2.0, 2.0, 1.0, 1.0])
        assert classes[0] == 1

    def test_exact_vote_and_mass_tie_takes_lower_index(self):
        # Classes 0 and 2 tie at two votes each and both accumulate a mass
        # of exactly 1.5 (the 4e-18 excess on class 0 is absorbed by float
        # rounding), so the lower index must win.
        bases = {
            (0, 1): 0.0,
            (0, 2): -40.0,
            (0, 3): 40.0,
            (1, 2): 40.0,
            (1, 3): -40.0,
            (2, 3): 0.0,
        }
        classes, scores = predict_batch(ovo_model(bases), PROBE)
        assert np.array_equal(scores[0] * 6.0, [2.0, 1.0, 2.0, 1.0])
        assert classes[0] == 0

    def test_clear_majority_needs_no_tie_break(self):
        bases = {pair: 0.0 for pair in combinations(range(4), 2)}
        bases[(0, 1)] = -40.0  # class 1 sweeps its three pairwise duels
        bases[(1, 2)] = 40.0
        bases[(1, 3)] = 40.0
        classes, scores = predict_batch(ovo_model(bases), PROBE)
        votes = scores[0] * 6.0
        assert votes[1] == votes.max() == 3.0
        assert classes[0] == 1


class TestSingleAndOva:
    def test_single_is_softmax_argmax(self):
        X, y = blob_fixture(per_class=10)
        model = train_framework("single", X, y, GBDTParams(n_estimators=10), seed=2)
        classes, scores = predict_batch(model, X)
        proba = predict_proba(model.learners["softmax"], X)
        assert np.array_equal(scores, proba)
        assert np.array_equal(classes, proba.argmax(axis=1))

    def test_ova_scores_are_per_class_probabilities(self):
        X, y = blob_fixture(per_class=10)
        model = train_framework("ova", X, y, GBDTParams(n_estimators=10), seed=2)
        classes, scores = predict_batch(model, X)
        for k in range(4):
            column = predict_proba(model.learners[f"class_{k}"], X)
            assert np.array_equal(scores[:, k], column)
        assert np.array_equal(classes, scores.argmax(axis=1))

    def test_uniform_scores_take_class_zero(self):
        learners = {f"class_{k}": const_learner(0.0) for k in range(4)}
        model = MulticlassModel(
            framework=Framework.OVA,
            n_classes=4,
            n_features=2,
            seed=0,
            learners=learners,
        )
        classes, scores = predict_batch(model, PROBE)
        assert classes[0] == 0
        assert np.all(scores == 0.5)


class TestWrappers:
    def test_predict_returns_identity_class(self):
        X, y = blob_fixture(per_class=6)
        model = train_framework("single", X, y, GBDTParams(n_estimators=3), seed=4)
        cls, scores = predict(model, X[0])
        assert type(cls) is IdentityClass
        assert scores.shape == (4,)

    def test_predict_plain_index_for_other_class_counts(self):
        X, y = blob_fixture(per_class=6, n_classes=3)
        model = train_framework(
            "single", X, y, GBDTParams(n_estimators=3), seed=4, n_classes=3
        )
        cls, _ = predict(model, X[0])
        assert type(cls) is not IdentityClass

    def test_predict_classes_matches_batch(self):
        X, y = blob_fixture(per_class=6)
        model = train_framework("ovo", X, y, GBDTParams(n_estimators=3), seed=4)
        classes, _ = predict_batch(model, X)
        assert np.array_equal(predict_classes(model, X), classes)


class TestRoundTrip:
    @pytest.mark.parametrize("framework", ["single", "ova", "ovo"])
    def test_serialization_preserves_predictions(self, framework):
        X, y = blob_fixture(per_class=8)
        model = train_framework(framework, X, y, GBDTParams(n_estimators=5), seed=6)
        clone = multiclass_from_dict(multiclass_to_dict(model))
        probe = np.random.default_rng(3).uniform(-1, 5, size=(60, 2))
        classes, scores = predict_batch(model, probe)
        classes2, scores2 = predict_batch(clone, probe)
        assert np.array_equal(classes, classes2)
        assert np.array_equal(scores, scores2)
