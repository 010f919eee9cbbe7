"""Skip-gram word embeddings with negative sampling, trained on user bios.

From-scratch and single-threaded on purpose: updates are applied in a fixed
order from one seeded generator, so the same corpus + seed + params yields
bit-identical vectors on every run. The trained model scores a bio by the
mean log-sigmoid of in-window (input . output) dot products, a coherence
measure that is 0 for bios with fewer than two in-vocabulary tokens and
strictly negative otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import EmptyCorpus
from .ingestion import tokenize_text
from .stopwords import STOPWORDS

SCORE_DTYPE = np.float64


@dataclass(frozen=True)
class SkipgramParams:
    dim: int = 50
    window: int = 2
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 2

    def to_dict(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "window": self.window,
            "negatives": self.negatives,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "min_count": self.min_count,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SkipgramParams":
        return cls(
            dim=int(d["dim"]),
            window=int(d["window"]),
            negatives=int(d["negatives"]),
            epochs=int(d["epochs"]),
            learning_rate=float(d["learning_rate"]),
            min_count=int(d["min_count"]),
        )


def preprocess_bio(bio: str) -> list[str]:
    """Tokenize a bio for embedding: lowercase, strip one leading sigil,
    drop stopwords. Token order is preserved; nothing else is normalized."""
    out: list[str] = []
    for tok in tokenize_text(bio):
        if tok[0] in "#@":
            tok = tok[1:]
        if tok and tok not in STOPWORDS:
            out.append(tok)
    return out


@dataclass(frozen=True)
class Vocabulary:
    """Token -> dense index, in first-appearance order, with corpus counts."""

    tokens: tuple[str, ...]
    frequencies: tuple[int, ...]
    index_of: dict[str, int] = field(compare=False)

    @classmethod
    def build(cls, corpus: Iterable[Sequence[str]], min_count: int) -> "Vocabulary":
        counts: dict[str, int] = {}
        for sentence in corpus:
            for tok in sentence:
                counts[tok] = counts.get(tok, 0) + 1
        kept = [(tok, c) for tok, c in counts.items() if c >= min_count]
        tokens = tuple(tok for tok, _ in kept)
        freqs = tuple(c for _, c in kept)
        return cls(
            tokens=tokens,
            frequencies=freqs,
            index_of={tok: i for i, tok in enumerate(tokens)},
        )

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class EmbeddingModel:
    params: SkipgramParams
    seed: int
    vocab: Vocabulary
    vectors_in: np.ndarray
    vectors_out: np.ndarray
    trained_pairs: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "seed": self.seed,
            "vocab": list(self.vocab.tokens),
            "frequencies": list(self.vocab.frequencies),
            "trained_pairs": self.trained_pairs,
            "vectors_in": [float(x) for x in self.vectors_in.ravel()],
            "vectors_out": [float(x) for x in self.vectors_out.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EmbeddingModel":
        params = SkipgramParams.from_dict(d["params"])
        tokens = tuple(str(t) for t in d["vocab"])
        freqs = tuple(int(f) for f in d["frequencies"])
        vocab = Vocabulary(
            tokens=tokens,
            frequencies=freqs,
            index_of={tok: i for i, tok in enumerate(tokens)},
        )
        shape = (len(tokens), params.dim)
        vec_in = np.array(d["vectors_in"], dtype=np.float64).reshape(shape)
        vec_out = np.array(d["vectors_out"], dtype=np.float64).reshape(shape)
        return cls(
            params=params,
            seed=int(d["seed"]),
            vocab=vocab,
            vectors_in=vec_in,
            vectors_out=vec_out,
            trained_pairs=int(d["trained_pairs"]),
        )


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(x, -60.0, 60.0)))


def _encode(corpus: Sequence[Sequence[str]], vocab: Vocabulary) -> list[list[int | None]]:
    # None marks an out-of-vocabulary position; it still consumes window
    # distance, which keeps training and scoring geometry identical.
    return [[vocab.index_of.get(tok) for tok in sent] for sent in corpus]


def _window_pairs(seq: list[int | None], window: int) -> Iterable[tuple[int, int]]:
    n = len(seq)
    for t in range(n):
        wt = seq[t]
        if wt is None:
            continue
        lo = max(0, t - window)
        hi = min(n, t + window + 1)
        for c in range(lo, hi):
            if c == t:
                continue
            wc = seq[c]
            if wc is not None:
                yield wt, wc


def train_skipgram(
    corpus: Sequence[Sequence[str]],
    params: SkipgramParams = SkipgramParams(),
    seed: int = 0,
) -> EmbeddingModel:
    """Train on pre-tokenized bios.

    Input vectors start uniform in (-0.5/dim, 0.5/dim), output vectors at
    zero. The learning rate decays linearly from learning_rate to 1% of it
    over the total pair count. A drawn negative equal to the positive context
    is discarded; duplicate negatives within one draw collapse to one update.
    """
    vocab = Vocabulary.build(corpus, params.min_count)
    if len(vocab) == 0:
        raise EmptyCorpus(
            f"no token occurs at least {params.min_count} times"
        )
    encoded = _encode(corpus, vocab)
    per_epoch = sum(1 for seq in encoded for _ in _window_pairs(seq, params.window))
    total = per_epoch * params.epochs

    rng = np.random.default_rng(seed)
    vec_in = (rng.random((len(vocab), params.dim)) - 0.5) / params.dim
    vec_out = np.zeros((len(vocab), params.dim), dtype=np.float64)

    model = EmbeddingModel(
        params=params,
        seed=seed,
        vocab=vocab,
        vectors_in=vec_in,
        vectors_out=vec_out,
        trained_pairs=total,
    )
    if total == 0:
        return model

    weights = np.asarray(vocab.frequencies, dtype=np.float64) ** 0.75
    cum = np.cumsum(weights)
    cum /= cum[-1]

    lr0 = params.learning_rate
    lr_min = lr0 / 100.0
    done = 0
    for _ in range(params.epochs):
        for seq in encoded:
            for wt, wc in _window_pairs(seq, params.window):
                lr = lr0 - (lr0 - lr_min) * (done / total)
                draws = np.searchsorted(cum, rng.random(params.negatives))
                negs = dict.fromkeys(int(d) for d in draws if d != wc)
                idx = np.fromiter((wc, *negs), dtype=np.intp)
                labels = np.zeros(len(idx))
                labels[0] = 1.0
                v = vec_in[wt]
                u = vec_out[idx]
                g = (labels - _sigmoid(u @ v)) * lr
                vec_out[idx] += g[:, None] * v
                vec_in[wt] = v + g @ u
                done += 1
    return model


def bio_score(model: EmbeddingModel, tokens: Sequence[str]) -> float:
    """Mean log-sigmoid over in-window ordered position pairs of a bio.

    Pairs are (input vector of the token at position t, output vector of the
    token at position c) for |t - c| <= window, c != t, both in-vocabulary.
    Returns 0.0 when fewer than two tokens are in-vocabulary, or when the
    model saw no training pairs at all.
    """
    if model.trained_pairs == 0:
        return 0.0
    seq = [model.vocab.index_of.get(tok) for tok in tokens]
    pairs = list(_window_pairs(seq, model.params.window))
    if not pairs:
        return 0.0
    wts = np.fromiter((p[0] for p in pairs), dtype=np.intp)
    wcs = np.fromiter((p[1] for p in pairs), dtype=np.intp)
    dots = np.einsum("ij,ij->i", model.vectors_in[wts], model.vectors_out[wcs])
    # log sigma(x) = -log(1 + e^(-x)), computed stably.
    return float(np.mean(-np.logaddexp(0.0, -dots)))


def score_bios(model: EmbeddingModel, bios: Iterable[str]) -> list[float]:
    return [bio_score(model, preprocess_bio(bio)) for bio in bios]
