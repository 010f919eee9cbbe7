"""Gradient-boosted regression trees, fit to second-order objectives.

Trees greedily maximize the Newton gain

    gain = G_L^2/(H_L + lambda) + G_R^2/(H_R + lambda) - G^2/(H + lambda)

over midpoint thresholds between consecutive distinct sorted values, accept a
split only when gain > min_gain, and set leaf values to -G/(H + lambda).
Ties break toward the lower feature index, then the lower threshold. Fitting
is exact and deterministic: no subsampling, no feature sampling, so the seed
argument is carried in the interface but never drawn from.

Two boosting objectives: binary logistic (sigmoid link, base score at the
prior log-odds) and K-class softmax (K trees per round against one shared
softmax, per-class prior log-probability base scores).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Union

import numpy as np

from .errors import EmptyData, SchemaMismatch, SingleClass

OBJECTIVE_BINARY = "binary_logistic"
OBJECTIVE_SOFTMAX = "softmax"


@dataclass(frozen=True)
class GBDTParams:
    n_estimators: int = 100
    learning_rate: float = 0.1
    max_depth: int = 3
    reg_lambda: float = 1.0
    min_gain: float = 0.0
    min_samples_leaf: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_estimators": self.n_estimators,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "reg_lambda": self.reg_lambda,
            "min_gain": self.min_gain,
            "min_samples_leaf": self.min_samples_leaf,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GBDTParams":
        return cls(
            n_estimators=int(d["n_estimators"]),
            learning_rate=float(d["learning_rate"]),
            max_depth=int(d["max_depth"]),
            reg_lambda=float(d["reg_lambda"]),
            min_gain=float(d["min_gain"]),
            min_samples_leaf=int(d["min_samples_leaf"]),
        )


@dataclass(frozen=True)
class Leaf:
    value: float


@dataclass(frozen=True)
class Split:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Split]


def _leaf_value(G: float, H: float, reg_lambda: float) -> float:
    denom = H + reg_lambda
    # Zero curvature and zero regularization: no information, take no step.
    if denom <= 0.0:
        return 0.0
    return -G / denom


class TreeFitter:
    """Reusable split machinery for one feature matrix.

    Columns are stable-argsorted once at construction. Each node carries its
    members as per-feature sorted index lists (sel) plus the matching sorted
    values (xs); children compress the parent's arrays with a boolean mask,
    so nothing is ever re-sorted and per-node cost scales with the parent's
    size. Boosting many trees over the same X pays the argsort once.
    """

    def __init__(self, X: np.ndarray):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("X must be 2-dimensional")
        if X.shape[0] == 0:
            raise EmptyData("cannot fit a tree to zero rows")
        self.n, self.d = X.shape
        self.root_sel = np.argsort(X, axis=0, kind="stable").T.copy()
        self.root_xs = X.T[np.arange(self.d)[:, None], self.root_sel]
        # Equal-neighbor candidates are never splittable; the root's mask is
        # data-only, so it is shared by every tree fitted on this matrix.
        self.root_eq = self.root_xs[:, 1:] == self.root_xs[:, :-1]
        self._row_buf = np.zeros(self.n, dtype=bool)

    def fit(
        self,
        gradients: np.ndarray,
        hessians: np.ndarray,
        params: GBDTParams,
        out_predictions: np.ndarray | None = None,
    ) -> TreeNode:
        g = np.asarray(gradients, dtype=np.float64)
        h = np.asarray(hessians, dtype=np.float64)
        if g.shape != (self.n,) or h.shape != (self.n,):
            raise ValueError("gradients/hessians must be 1-D and match X rows")
        gh = np.stack((g, h))
        G = float(g.sum())
        H = float(h.sum())
        # Positive regularization with nonnegative curvature keeps every
        # denominator in the gain formula positive, making the per-node
        # non-finite sweep unnecessary.
        safe = params.reg_lambda > 0.0 and (h.size == 0 or float(h.min()) >= 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self._grow(
                gh, self.root_sel, self.root_xs, G, H, 0, params, safe,
                out_predictions,
            )

    def _best_split(
        self,
        xs: np.ndarray,
        cum: np.ndarray,
        G: float,
        H: float,
        params: GBDTParams,
        safe: bool,
    ) -> tuple[int, int, float] | None:
        """Return (feature, split position, threshold) or None.

        Candidate i splits a sorted column between positions i and i+1:
        gain = GL^2/(HL+lam) + GR^2/(HR+lam) - G^2/(H+lam). The parent term
        is constant across candidates, so the scan ranks the first two
        terms only and applies it to the winner. The flat argmax scans
        features in index order and positions in ascending-threshold order,
        so its first maximum realizes both tie-break rules.
        """
        m = xs.shape[1]
        gl = cum[0, :, :-1]
        hl = cum[1, :, :-1]
        lam = params.reg_lambda
        gain = gl * gl
        denom = hl + lam
        gain /= denom
        right = G - gl
        right *= right
        np.subtract(H + lam, hl, out=denom)
        right /= denom
        gain += right
        if not safe:
            gain[~np.isfinite(gain)] = -np.inf
        eq = self.root_eq if xs is self.root_xs else xs[:, 1:] == xs[:, :-1]
        gain[eq] = -np.inf
        msl = params.min_samples_leaf
        if msl > 1:
            # Candidate i leaves i+1 rows on the left, m-i-1 on the right.
            gain[:, : msl - 1] = -np.inf
            gain[:, m - msl :] = -np.inf
        flat = int(np.argmax(gain))
        f, i = divmod(flat, m - 1)
        if not gain[f, i] - np.divide(G * G, H + lam) > params.min_gain:
            return None
        threshold = (xs[f, i] + xs[f, i + 1]) / 2.0
        return f, i, float(threshold)

    def _grow(
        self,
        gh: np.ndarray,
        sel: np.ndarray,
        xs: np.ndarray,
        G: float,
        H: float,
        depth: int,
        params: GBDTParams,
        safe: bool,
        out: np.ndarray | None,
    ) -> TreeNode:
        m = sel.shape[1]
        min_rows = max(2, 2 * params.min_samples_leaf)
        if depth < params.max_depth and m >= min_rows:
            cum = gh.take(sel, axis=1)
            np.add.accumulate(cum, axis=2, out=cum)
            found = self._best_split(xs, cum, G, H, params, safe)
            if found is not None:
                f, i, threshold = found
                GL = float(cum[0, f, i])
                HL = float(cum[1, f, i])
                sizes = (i + 1, m - i - 1)
                sums = ((GL, HL), (G - GL, H - HL))
                grows = tuple(
                    depth + 1 < params.max_depth and size >= min_rows
                    for size in sizes
                )
                member = None
                if any(grows):
                    # Positions 0..i of feature f's sorted run are exactly
                    # the left side; scatter them to a row mask to filter
                    # every feature's list while preserving sorted order.
                    left_idx = sel[f, : i + 1]
                    self._row_buf[left_idx] = True
                    member = self._row_buf[sel]
                    self._row_buf[left_idx] = False
                children = []
                for side in (0, 1):
                    size = sizes[side]
                    GS, HS = sums[side]
                    if grows[side]:
                        children.append(
                            self._grow(
                                gh,
                                sel[member].reshape(self.d, size),
                                xs[member].reshape(self.d, size),
                                GS,
                                HS,
                                depth + 1,
                                params,
                                safe,
                                out,
                            )
                        )
                    else:
                        # A guaranteed leaf: its rows are one slice of
                        # feature f's sorted run, no filtering needed.
                        value = _leaf_value(GS, HS, params.reg_lambda)
                        if out is not None:
                            rows = sel[f, : i + 1] if side == 0 else sel[f, i + 1 :]
                            out[rows] = value
                        children.append(Leaf(value))
                    if member is not None and side == 0:
                        np.logical_not(member, out=member)
                return Split(f, threshold, children[0], children[1])
        value = _leaf_value(G, H, params.reg_lambda)
        if out is not None:
            out[sel[0]] = value
        return Leaf(value)


def fit_tree(
    X: np.ndarray,
    gradients: np.ndarray,
    hessians: np.ndarray,
    params: GBDTParams = GBDTParams(),
    out_predictions: np.ndarray | None = None,
) -> TreeNode:
    """Fit one regression tree to per-sample gradient/hessian pairs.

    out_predictions, when given, receives every training row's leaf value as
    a side effect, saving a full traversal per boosting round.
    """
    return TreeFitter(X).fit(gradients, hessians, params, out_predictions)


def tree_values(tree: TreeNode, X: np.ndarray) -> np.ndarray:
    """Evaluate one tree on a (n, d) matrix."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.float64)
    _eval_into(tree, X, np.arange(X.shape[0]), out)
    return out


def _eval_into(
    tree: TreeNode, X: np.ndarray, rows: np.ndarray, out: np.ndarray
) -> None:
    if isinstance(tree, Leaf):
        out[rows] = tree.value
        return
    mask = X[rows, tree.feature_index] <= tree.threshold
    left_rows = rows[mask]
    right_rows = rows[~mask]
    if left_rows.size:
        _eval_into(tree.left, X, left_rows, out)
    if right_rows.size:
        _eval_into(tree.right, X, right_rows, out)


@dataclass
class BoostedModel:
    """A fitted ensemble.

    trees is a flat list for the binary objective and a list of K-tree rounds
    for softmax. base_score is one float or a K-list accordingly.
    """

    objective: str
    n_classes: int
    n_features: int
    base_score: Any
    params: GBDTParams
    seed: int
    trees: list


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def softmax(margins: np.ndarray) -> np.ndarray:
    """Row-wise softmax, max-shifted for stability."""
    m = np.asarray(margins, dtype=np.float64)
    shifted = m - m.max(axis=-1, keepdims=True)
    np.exp(shifted, out=shifted)
    shifted /= shifted.sum(axis=-1, keepdims=True)
    return shifted


def _check_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("X must be 2-dimensional")
    if X.shape[0] == 0:
        raise EmptyData("no rows")
    return X


def fit_gbdt_binary(
    X: np.ndarray,
    y: np.ndarray,
    params: GBDTParams = GBDTParams(),
    seed: int = 0,
) -> BoostedModel:
    """Boost binary logistic loss. y must contain both 0 and 1.

    Round t: p = sigmoid(margin), gradient p - y, hessian p(1 - p); the new
    tree's predictions join the margin scaled by the learning rate.
    """
    X = _check_matrix(X)
    y = np.asarray(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    values = set(np.unique(y).tolist())
    if not values <= {0, 1}:
        raise ValueError("binary labels must be 0 or 1")
    if len(values) < 2:
        raise SingleClass("need both classes to fit a binary learner")
    yf = y.astype(np.float64)
    n = X.shape[0]
    p_bar = float(yf.mean())
    base = float(np.log(p_bar / (1.0 - p_bar)))
    margin = np.full(n, base)
    trees: list[TreeNode] = []
    pred = np.empty(n)
    fitter = TreeFitter(X)
    for _ in range(params.n_estimators):
        p = _sigmoid(margin)
        grad = p - yf
        hess = p * (1.0 - p)
        tree = fitter.fit(grad, hess, params, out_predictions=pred)
        trees.append(tree)
        margin += params.learning_rate * pred
    return BoostedModel(
        objective=OBJECTIVE_BINARY,
        n_classes=2,
        n_features=X.shape[1],
        base_score=base,
        params=params,
        seed=seed,
        trees=trees,
    )


def fit_gbdt_softmax(
    X: np.ndarray,
    y: np.ndarray,
    params: GBDTParams = GBDTParams(),
    seed: int = 0,
    n_classes: int | None = None,
) -> BoostedModel:
    """Boost K-class softmax loss: K trees per round against one shared
    softmax of the current margins. Every class in [0, K) must appear."""
    X = _check_matrix(X)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] != y.shape[0]:
        raise ValueError("X and y row counts differ")
    if y.size and (y.min() < 0):
        raise ValueError("labels must be non-negative")
    K = int(n_classes) if n_classes is not None else int(y.max()) + 1
    if y.size and int(y.max()) >= K:
        raise ValueError(f"label {int(y.max())} outside [0, {K})")
    counts = np.bincount(y, minlength=K)
    if K < 2:
        raise SingleClass("softmax needs at least two classes")
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise SingleClass(f"class {int(missing[0])} has no examples")
    n = X.shape[0]
    base = np.log(counts / n)
    margins = np.tile(base, (n, 1))
    onehot = np.eye(K)[y]
    rounds: list[list[TreeNode]] = []
    pred = np.empty(n)
    fitter = TreeFitter(X)
    for _ in range(params.n_estimators):
        P = softmax(margins)
        grads = np.ascontiguousarray((P - onehot).T)
        hesses = np.ascontiguousarray((P * (1.0 - P)).T)
        round_trees: list[TreeNode] = []
        for k in range(K):
            tree = fitter.fit(grads[k], hesses[k], params, out_predictions=pred)
            round_trees.append(tree)
            margins[:, k] += params.learning_rate * pred
        rounds.append(round_trees)
    return BoostedModel(
        objective=OBJECTIVE_SOFTMAX,
        n_classes=K,
        n_features=X.shape[1],
        base_score=[float(b) for b in base],
        params=params,
        seed=seed,
        trees=rounds,
    )


def _check_features(model: BoostedModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise SchemaMismatch(
            f"model expects {model.n_features} features, got shape {X.shape}"
        )
    return X


def predict_margin(model: BoostedModel, X: np.ndarray) -> np.ndarray:
    """Raw additive score(s): (n,) for binary, (n, K) for softmax.

    A 1-D input is treated as a single row and returns an unwrapped value.
    """
    single = np.asarray(X).ndim == 1
    Xm = _check_features(model, X)
    if model.objective == OBJECTIVE_BINARY:
        margin = np.full(Xm.shape[0], float(model.base_score))
        for tree in model.trees:
            margin += model.params.learning_rate * tree_values(tree, Xm)
        return margin[0] if single else margin
    margins = np.tile(np.asarray(model.base_score, dtype=np.float64), (Xm.shape[0], 1))
    for round_trees in model.trees:
        for k, tree in enumerate(round_trees):
            margins[:, k] += model.params.learning_rate * tree_values(tree, Xm)
    return margins[0] if single else margins


def predict_proba(model: BoostedModel, X: np.ndarray) -> np.ndarray:
    """Probabilities: sigmoid of the binary margin, softmax of the K margins."""
    margin = predict_margin(model, X)
    if model.objective == OBJECTIVE_BINARY:
        return _sigmoid(np.asarray(margin, dtype=np.float64))
    return softmax(np.asarray(margin, dtype=np.float64))


def log_loss_binary(y: np.ndarray, proba: np.ndarray) -> float:
    """Mean negative log-likelihood, clipped away from exact 0/1."""
    y = np.asarray(y, dtype=np.float64)
    p = np.clip(np.asarray(proba, dtype=np.float64), 1e-15, 1.0 - 1e-15)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def tree_to_dict(tree: TreeNode) -> dict[str, Any]:
    if isinstance(tree, Leaf):
        return {"leaf": tree.value}
    return {
        "feature": tree.feature_index,
        "threshold": tree.threshold,
        "left": tree_to_dict(tree.left),
        "right": tree_to_dict(tree.right),
    }


def tree_from_dict(d: dict[str, Any]) -> TreeNode:
    if "leaf" in d:
        return Leaf(float(d["leaf"]))
    return Split(
        feature_index=int(d["feature"]),
        threshold=float(d["threshold"]),
        left=tree_from_dict(d["left"]),
        right=tree_from_dict(d["right"]),
    )


def model_to_dict(model: BoostedModel) -> dict[str, Any]:
    if model.objective == OBJECTIVE_BINARY:
        trees = [tree_to_dict(t) for t in model.trees]
    else:
        trees = [[tree_to_dict(t) for t in rnd] for rnd in model.trees]
    return {
        "objective": model.objective,
        "n_classes": model.n_classes,
        "n_features": model.n_features,
        "base_score": model.base_score,
        "params": model.params.to_dict(),
        "seed": model.seed,
        "trees": trees,
    }


def model_from_dict(d: dict[str, Any]) -> BoostedModel:
    objective = d["objective"]
    if objective == OBJECTIVE_BINARY:
        trees = [tree_from_dict(t) for t in d["trees"]]
        base = float(d["base_score"])
    else:
        trees = [[tree_from_dict(t) for t in rnd] for rnd in d["trees"]]
        base = [float(b) for b in d["base_score"]]
    return BoostedModel(
        objective=objective,
        n_classes=int(d["n_classes"]),
        n_features=int(d["n_features"]),
        base_score=base,
        params=GBDTParams.from_dict(d["params"]),
        seed=int(d["seed"]),
        trees=trees,
    )
