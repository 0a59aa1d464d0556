"""Skip-gram word embeddings, POS-weighted sentence encoding, vector file IO.

The trainer is skip-gram with negative sampling written against numpy:
unigram^(3/4) negative distribution, per-position window shrink, linear
learning-rate decay. In deterministic mode (workers=1, fixed seed) the
resulting model file is byte-identical across runs.

A sentence vector is the convex combination of the per-POS mean word
vectors over the VERB / NOUN / ADJ buckets; empty or fully out-of-vocab
buckets are dropped and the remaining weights renormalized. The second
backend is an import boundary: any external encoder can supply sentence
vectors through the VEC1 file format.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .preprocess import Token

CONTENT_POS = ("VERB", "NOUN", "ADJ")
EXTERNAL_BACKEND = "external"
SKIPGRAM_BACKEND = "skipgram"

WORD_HEADER = "VECW1"
SENTENCE_HEADER = "VEC1"


class EmbeddingError(Exception):
    pass


class VectorFormatError(EmbeddingError):
    """Malformed vector file (bad header, dimension mismatch, bad float)."""


@dataclass
class SkipgramConfig:
    dim: int = 300
    window: int = 5
    negative: int = 5
    epochs: int = 5
    min_count: int = 5
    learning_rate: float = 0.025
    seed: int = 42
    workers: int = 1

    def to_record(self) -> dict:
        return {
            "dim": self.dim, "window": self.window, "negative": self.negative,
            "epochs": self.epochs, "min_count": self.min_count,
            "learning_rate": self.learning_rate, "seed": self.seed,
            "workers": self.workers,
        }


@dataclass(frozen=True)
class PosWeights:
    w_verb: float = 1.0 / 3.0
    w_noun: float = 1.0 / 3.0
    w_adj: float = 1.0 / 3.0

    def __post_init__(self):
        if min(self.w_verb, self.w_noun, self.w_adj) < 0:
            raise EmbeddingError("POS weights must be non-negative")
        if abs(self.w_verb + self.w_noun + self.w_adj - 1.0) > 1e-9:
            raise EmbeddingError("POS weights must sum to 1")

    def for_pos(self, pos: str) -> float:
        return {"VERB": self.w_verb, "NOUN": self.w_noun, "ADJ": self.w_adj}[pos]


@dataclass(frozen=True)
class SentenceVector:
    sentence_id: str
    backend_id: str
    values: np.ndarray


class WordEmbeddingModel:
    def __init__(self, model_id: str, dim: int, vocab: dict[str, int],
                 vectors: np.ndarray, train_config: dict):
        self.model_id = model_id
        self.dim = dim
        self.vocab = vocab
        self.vectors = vectors
        self.train_config = train_config

    def vector(self, lemma: str) -> Optional[np.ndarray]:
        idx = self.vocab.get(lemma)
        return self.vectors[idx] if idx is not None else None

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.vocab

    def save(self, path: str | Path) -> None:
        _write_vectors(path, WORD_HEADER, self.dim,
                       ((lemma, self.vectors[idx]) for lemma, idx in
                        sorted(self.vocab.items(), key=lambda kv: kv[1])))

    @classmethod
    def load(cls, path: str | Path, model_id: str = "skipgram") -> "WordEmbeddingModel":
        dim, rows = _read_vectors(path, WORD_HEADER)
        vocab = {key: i for i, (key, _) in enumerate(rows)}
        if len(vocab) != len(rows):
            raise VectorFormatError(f"{path}: duplicate lemma in word-vector file")
        matrix = np.vstack([vec for _, vec in rows]) if rows else np.empty((0, dim))
        return cls(model_id=model_id, dim=dim, vocab=vocab, vectors=matrix, train_config={})


# ---------------------------------------------------------------------------
# Skip-gram training
# ---------------------------------------------------------------------------

def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def train_skipgram(sentences: Sequence[Sequence[str]], config: Optional[SkipgramConfig] = None,
                   model_id: str = "skipgram") -> WordEmbeddingModel:
    """Train skip-gram with negative sampling over tokenized sentences.

    Deterministic with workers=1 and a fixed seed. With workers>1 the
    input matrix is updated by all threads without coordination
    (asynchronous SGD); results then vary run to run.
    """
    config = config or SkipgramConfig()
    if config.dim < 2:
        raise EmbeddingError("dim must be >= 2")
    if not sentences:
        raise EmbeddingError("training corpus is empty")

    freq: dict[str, int] = {}
    for sent in sentences:
        for lemma in sent:
            freq[lemma] = freq.get(lemma, 0) + 1
    vocab_words = sorted(w for w, n in freq.items() if n >= config.min_count)
    if not vocab_words:
        raise EmbeddingError(f"no lemma reaches min_count={config.min_count}")
    vocab = {w: i for i, w in enumerate(vocab_words)}

    counts = np.asarray([freq[w] for w in vocab_words], dtype=np.float64)
    noise = counts ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    encoded = [np.asarray([vocab[w] for w in sent if w in vocab], dtype=np.int64)
               for sent in sentences]
    encoded = [s for s in encoded if len(s) >= 2]
    total_tokens = sum(len(s) for s in encoded)
    if total_tokens == 0:
        raise EmbeddingError("no sentence has two or more in-vocab tokens")

    rng = np.random.default_rng(config.seed)
    w_in = rng.uniform(-0.5 / config.dim, 0.5 / config.dim, size=(len(vocab), config.dim))
    w_out = np.zeros((len(vocab), config.dim))

    schedule_total = config.epochs * total_tokens
    lr0 = config.learning_rate
    lr_floor = lr0 * 1e-4

    def train_span(sentence_list, rng_local, processed_start):
        processed = processed_start
        for sent in sentence_list:
            shrinks = rng_local.integers(1, config.window + 1, size=len(sent))
            draws = rng_local.random(size=(len(sent), 2 * config.window, config.negative))
            for i, center in enumerate(sent):
                lr = max(lr_floor, lr0 * (1.0 - processed / (schedule_total + 1)))
                processed += 1
                span = shrinks[i]
                lo, hi = max(0, i - span), min(len(sent), i + span + 1)
                slot = 0
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = sent[j]
                    negs = np.searchsorted(noise_cdf, draws[i, slot])
                    slot += 1
                    targets = np.concatenate(([context], negs[negs != context]))
                    labels = np.zeros(len(targets))
                    labels[0] = 1.0
                    v = w_in[center]
                    out_rows = w_out[targets]
                    grad = _sigmoid(out_rows @ v) - labels
                    w_in[center] = v - lr * (grad @ out_rows)
                    w_out[targets] = out_rows - lr * np.outer(grad, v)
        return processed

    for epoch in range(config.epochs):
        if config.workers <= 1:
            train_span(encoded, rng, epoch * total_tokens)
        else:
            chunks = [encoded[k::config.workers] for k in range(config.workers)]
            seeds = rng.integers(0, 2**63 - 1, size=config.workers)
            threads = [
                threading.Thread(
                    target=train_span,
                    args=(chunk, np.random.default_rng(int(seed)), epoch * total_tokens),
                )
                for chunk, seed in zip(chunks, seeds)
            ]
            for t in threads:
                t.start()
            for t in threads:
                t.join()

    return WordEmbeddingModel(
        model_id=model_id, dim=config.dim, vocab=vocab, vectors=w_in,
        train_config=config.to_record(),
    )


# ---------------------------------------------------------------------------
# Sentence encoding
# ---------------------------------------------------------------------------

def encode_sentence(model: WordEmbeddingModel, tokens: Sequence[Token],
                    weights: Optional[PosWeights] = None) -> Optional[np.ndarray]:
    """Weighted sum of per-POS mean word vectors; None when unencodable.

    Each of the VERB/NOUN/ADJ buckets contributes weight * mean(vectors of
    its in-vocab tokens). Buckets that are empty or fully out-of-vocab are
    dropped and the remaining weights renormalized to sum 1; when every
    bucket drops, the sentence is unencodable (a value, not an error).
    """
    weights = weights or PosWeights()
    bucket_means = []
    bucket_weights = []
    for pos in CONTENT_POS:
        vecs = [model.vector(t.lemma) for t in tokens if t.pos == pos]
        vecs = [v for v in vecs if v is not None]
        if not vecs:
            continue
        bucket_means.append(np.mean(vecs, axis=0))
        bucket_weights.append(weights.for_pos(pos))
    if not bucket_means or sum(bucket_weights) == 0:
        return None
    scale = 1.0 / sum(bucket_weights)
    out = np.zeros(model.dim)
    for mean, w in zip(bucket_means, bucket_weights):
        out += (w * scale) * mean
    if not np.all(np.isfinite(out)) or not np.any(out):
        return None
    return out


# ---------------------------------------------------------------------------
# Sentence-vector stores and the VEC1 / VECW1 formats
# ---------------------------------------------------------------------------

class SentenceVectorStore:
    """Fixed-dimension sentence vectors under one backend id."""

    def __init__(self, backend_id: str, dim: int):
        if dim <= 0:
            raise EmbeddingError("dim must be positive")
        self.backend_id = backend_id
        self.dim = dim
        self._ids: list[str] = []
        self._rows: list[np.ndarray] = []
        self._index: dict[str, int] = {}
        self._matrix: Optional[np.ndarray] = None
        self._norms: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, sentence_id: str) -> bool:
        return sentence_id in self._index

    def add(self, sentence_id: str, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self.dim,):
            raise VectorFormatError(
                f"vector for {sentence_id!r} has dim {values.shape}, expected ({self.dim},)"
            )
        if not np.all(np.isfinite(values)):
            raise VectorFormatError(f"vector for {sentence_id!r} has non-finite values")
        if not np.any(values):
            raise VectorFormatError(f"vector for {sentence_id!r} is the zero vector")
        if sentence_id in self._index:
            raise VectorFormatError(f"duplicate sentence_id {sentence_id!r}")
        self._index[sentence_id] = len(self._ids)
        self._ids.append(sentence_id)
        self._rows.append(values)
        self._matrix = None
        self._norms = None

    @classmethod
    def from_matrix(cls, backend_id: str, ids: Sequence[str],
                    matrix: np.ndarray) -> "SentenceVectorStore":
        """Bulk-load rows that are already validated as a matrix."""
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or len(ids) != matrix.shape[0]:
            raise VectorFormatError("ids and matrix rows must line up")
        if not np.all(np.isfinite(matrix)):
            raise VectorFormatError("matrix has non-finite values")
        if np.any(~matrix.any(axis=1)):
            raise VectorFormatError("matrix contains a zero vector")
        store = cls(backend_id, matrix.shape[1])
        if len(set(ids)) != len(ids):
            raise VectorFormatError("duplicate sentence_id in bulk load")
        store._ids = [str(s) for s in ids]
        store._rows = list(matrix)
        store._index = {sid: i for i, sid in enumerate(store._ids)}
        store._matrix = matrix
        return store

    def get(self, sentence_id: str) -> Optional[np.ndarray]:
        idx = self._index.get(sentence_id)
        return self._rows[idx] if idx is not None else None

    def vector(self, sentence_id: str) -> SentenceVector:
        values = self.get(sentence_id)
        if values is None:
            raise EmbeddingError(f"no vector for sentence {sentence_id!r}")
        return SentenceVector(sentence_id=sentence_id, backend_id=self.backend_id, values=values)

    def ids(self) -> list[str]:
        return list(self._ids)

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.vstack(self._rows) if self._rows else np.empty((0, self.dim))
        return self._matrix

    def norms(self) -> np.ndarray:
        if self._norms is None:
            self._norms = np.linalg.norm(self.matrix(), axis=1)
        return self._norms

    def subset(self, sentence_ids: Iterable[str]) -> "SentenceVectorStore":
        sub = SentenceVectorStore(self.backend_id, self.dim)
        for sid in sentence_ids:
            values = self.get(sid)
            if values is not None:
                sub.add(sid, values)
        return sub

    def save(self, path: str | Path) -> None:
        _write_vectors(path, SENTENCE_HEADER, self.dim, zip(self._ids, self._rows))

    @classmethod
    def load(cls, path: str | Path, backend_id: str) -> "SentenceVectorStore":
        dim, rows = _read_vectors(path, SENTENCE_HEADER)
        store = cls(backend_id, dim)
        for key, vec in rows:
            store.add(key, vec)
        return store


def import_external_vectors(path: str | Path, known_sentence_ids: Iterable[str],
                            backend_id: str = EXTERNAL_BACKEND) -> SentenceVectorStore:
    """Load a VEC1 file as the external backend, validating ids against the corpus."""
    known = set(known_sentence_ids)
    store = SentenceVectorStore.load(path, backend_id)
    for sid in store.ids():
        if sid not in known:
            raise VectorFormatError(f"{path}: unknown sentence_id {sid!r}")
    return store


def _format_vector(values: np.ndarray) -> str:
    return " ".join(repr(float(v)) for v in values)


def _write_vectors(path: str | Path, header: str, dim: int, rows) -> None:
    rows = list(rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{header} {dim} {len(rows)}\n")
        for key, values in rows:
            fh.write(f"{key}\t{_format_vector(values)}\n")


def _read_vectors(path: str | Path, expected_header: str):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.endswith("\n"):
        raise VectorFormatError(f"{path}: missing trailing newline")
    lines = text.split("\n")[:-1]
    if not lines:
        raise VectorFormatError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != expected_header:
        raise VectorFormatError(
            f"{path}: bad header {lines[0]!r}, expected '{expected_header} <dim> <count>'"
        )
    try:
        dim, count = int(head[1]), int(head[2])
    except ValueError as exc:
        raise VectorFormatError(f"{path}: non-integer header fields") from exc
    if dim <= 0:
        raise VectorFormatError(f"{path}: dim must be positive")
    if len(lines) - 1 != count:
        raise VectorFormatError(f"{path}: header says {count} rows, file has {len(lines) - 1}")

    rows = []
    for line_no, line in enumerate(lines[1:], 2):
        if "\t" not in line:
            raise VectorFormatError(f"{path}:{line_no}: expected '<id>\\t<floats>'")
        key, raw = line.split("\t", 1)
        parts = raw.split()
        if len(parts) != dim:
            raise VectorFormatError(
                f"{path}:{line_no}: {len(parts)} floats, expected {dim}"
            )
        try:
            vec = np.asarray([float(p) for p in parts], dtype=np.float64)
        except ValueError as exc:
            raise VectorFormatError(f"{path}:{line_no}: malformed float: {exc}") from exc
        rows.append((key, vec))
    return dim, rows
