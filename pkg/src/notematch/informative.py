"""Semi-supervised multinomial Naive Bayes with EM (informative-review filter).

A smoothed multinomial NB is fit on the labeled seed docs, then EM
alternates between soft class assignments for the unlabeled docs (E-step)
and re-estimation over hard labeled counts plus soft unlabeled counts
(M-step). Docs are bags of lemmas from the normalized token stream.

``log_likelihood_trace`` records the objective EM actually ascends: the
data log-likelihood plus the Dirichlet smoothing term implied by add-alpha
estimates. That sum is guaranteed non-decreasing; the raw data likelihood
alone is not under MAP re-estimation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

INFORMATIVE = "informative"
NON_INFORMATIVE = "non-informative"
CLASSES = (INFORMATIVE, NON_INFORMATIVE)


class TrainingError(Exception):
    pass


@dataclass(frozen=True)
class LabeledDoc:
    tokens: tuple[str, ...]
    label: str

    def __post_init__(self):
        if not self.tokens:
            raise TrainingError("labeled doc has no tokens")
        if self.label not in CLASSES:
            raise TrainingError(f"unknown label {self.label!r}")


@dataclass
class EmnbConfig:
    max_iter: int = 50
    tol: float = 1e-4
    smoothing_alpha: float = 1.0


@dataclass
class EmnbModel:
    vocabulary: dict[str, int]
    class_priors: np.ndarray          # shape (2,)
    word_likelihoods: np.ndarray      # shape (2, V), rows sum to 1
    em_iterations_run: int
    log_likelihood_trace: list[float]
    smoothing_alpha: float

    def __post_init__(self):
        self._log_priors = np.log(self.class_priors)
        self._log_likelihoods = np.log(self.word_likelihoods)

    def save(self, path: str | Path) -> None:
        doc = {
            "vocabulary": self.vocabulary,
            "class_priors": self.class_priors.tolist(),
            "word_likelihoods": self.word_likelihoods.tolist(),
            "em_iterations_run": self.em_iterations_run,
            "log_likelihood_trace": self.log_likelihood_trace,
            "smoothing_alpha": self.smoothing_alpha,
            "classes": list(CLASSES),
        }
        Path(path).write_text(
            json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "EmnbModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            vocabulary=doc["vocabulary"],
            class_priors=np.asarray(doc["class_priors"], dtype=np.float64),
            word_likelihoods=np.asarray(doc["word_likelihoods"], dtype=np.float64),
            em_iterations_run=doc["em_iterations_run"],
            log_likelihood_trace=doc["log_likelihood_trace"],
            smoothing_alpha=doc["smoothing_alpha"],
        )


def _flatten(docs: Sequence[Sequence[str]], vocab: dict[str, int]):
    """Pack docs into flat (index, count) arrays plus reduceat offsets."""
    idx_parts, cnt_parts, offsets, lengths = [], [], [], []
    pos = 0
    for doc in docs:
        counts: dict[int, int] = {}
        for lemma in doc:
            j = vocab.get(lemma)
            if j is not None:
                counts[j] = counts.get(j, 0) + 1
        offsets.append(pos)
        lengths.append(len(counts))
        for j in sorted(counts):
            idx_parts.append(j)
            cnt_parts.append(counts[j])
        pos += len(counts)
    return (
        np.asarray(idx_parts, dtype=np.int64),
        np.asarray(cnt_parts, dtype=np.float64),
        np.asarray(offsets, dtype=np.int64),
        np.asarray(lengths, dtype=np.int64),
    )


def _doc_scores(log_lik_row: np.ndarray, idx, cnt, offsets, n_docs: int) -> np.ndarray:
    """Per-doc sum of count * log-likelihood for one class."""
    if n_docs == 0:
        return np.empty(0)
    terms = log_lik_row[idx] * cnt if len(idx) else np.empty(0)
    csum = np.concatenate(([0.0], np.cumsum(terms)))
    bounds = np.append(offsets, len(idx))
    return csum[bounds[1:]] - csum[bounds[:-1]]


def _logsumexp2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    hi = np.maximum(a, b)
    return hi + np.log(np.exp(a - hi) + np.exp(b - hi))


def train_emnb(
    labeled: Sequence[LabeledDoc],
    unlabeled: Sequence[Sequence[str]],
    config: Optional[EmnbConfig] = None,
) -> EmnbModel:
    """Fit the classifier on labeled seeds plus (optionally) unlabeled docs."""
    config = config or EmnbConfig()
    if config.smoothing_alpha <= 0:
        raise TrainingError("smoothing_alpha must be > 0")
    labels_present = {d.label for d in labeled}
    for cls_name in CLASSES:
        if cls_name not in labels_present:
            raise TrainingError(f"no labeled docs for class {cls_name!r}")

    vocab_terms = sorted({w for d in labeled for w in d.tokens} | {w for d in unlabeled for w in d})
    if not vocab_terms:
        raise TrainingError("vocabulary is empty")
    vocab = {w: i for i, w in enumerate(vocab_terms)}
    n_vocab = len(vocab)
    alpha = config.smoothing_alpha

    # hard counts from labeled docs
    hard_word = np.zeros((2, n_vocab))
    hard_docs = np.zeros(2)
    for doc in labeled:
        c = CLASSES.index(doc.label)
        hard_docs[c] += 1
        for lemma in doc.tokens:
            hard_word[c, vocab[lemma]] += 1

    u_idx, u_cnt, u_off, _ = _flatten(unlabeled, vocab)
    n_unlabeled = len(unlabeled)
    l_idx, l_cnt, l_off, _ = _flatten([d.tokens for d in labeled], vocab)
    l_class = np.asarray([CLASSES.index(d.label) for d in labeled])

    def estimate(word_counts: np.ndarray, doc_counts: np.ndarray):
        priors = doc_counts / doc_counts.sum()
        lik = (word_counts + alpha) / (word_counts.sum(axis=1, keepdims=True) + alpha * n_vocab)
        return priors, lik

    def objective(priors: np.ndarray, lik: np.ndarray) -> float:
        log_p = np.log(priors)
        log_l = np.log(lik)
        total = alpha * float(log_l.sum())  # Dirichlet smoothing term
        for c in range(2):
            mask = l_class == c
            if mask.any():
                scores = _doc_scores(log_l[c], l_idx, l_cnt, l_off, len(labeled))
                total += float(((log_p[c] + scores) * mask).sum())
        if n_unlabeled:
            s0 = log_p[0] + _doc_scores(log_l[0], u_idx, u_cnt, u_off, n_unlabeled)
            s1 = log_p[1] + _doc_scores(log_l[1], u_idx, u_cnt, u_off, n_unlabeled)
            total += float(_logsumexp2(s0, s1).sum())
        return total

    priors, lik = estimate(hard_word, hard_docs)
    trace = [objective(priors, lik)]
    iterations = 0

    if n_unlabeled:
        for _ in range(config.max_iter):
            # E-step: soft class posteriors for unlabeled docs
            log_p = np.log(priors)
            log_l = np.log(lik)
            s0 = log_p[0] + _doc_scores(log_l[0], u_idx, u_cnt, u_off, n_unlabeled)
            s1 = log_p[1] + _doc_scores(log_l[1], u_idx, u_cnt, u_off, n_unlabeled)
            norm = _logsumexp2(s0, s1)
            q = np.stack([np.exp(s0 - norm), np.exp(s1 - norm)])  # (2, U)

            # M-step: hard + soft counts
            word_counts = hard_word.copy()
            doc_counts = hard_docs + q.sum(axis=1)
            doc_lens = np.diff(np.append(u_off, len(u_idx)))
            for c in range(2):
                weights = np.repeat(q[c], doc_lens) * u_cnt
                np.add.at(word_counts[c], u_idx, weights)
            priors, lik = estimate(word_counts, doc_counts)

            iterations += 1
            trace.append(objective(priors, lik))
            if trace[-1] - trace[-2] < config.tol:
                break

    return EmnbModel(
        vocabulary=vocab,
        class_priors=priors,
        word_likelihoods=lik,
        em_iterations_run=iterations,
        log_likelihood_trace=trace,
        smoothing_alpha=alpha,
    )


def classify(model: EmnbModel, tokens: Iterable[str]) -> dict:
    """Label one doc; returns {"label", "posterior"} for the winning class.

    Out-of-vocabulary lemmas are ignored; a doc with no known lemmas falls
    back to the class priors.
    """
    scores = model._log_priors.copy()
    for lemma in tokens:
        j = model.vocabulary.get(lemma)
        if j is not None:
            scores = scores + model._log_likelihoods[:, j]
    hi = scores.max()
    posteriors = np.exp(scores - hi)
    posteriors /= posteriors.sum()
    winner = int(np.argmax(posteriors))
    return {"label": CLASSES[winner], "posterior": float(posteriors[winner])}


def posterior_informative(model: EmnbModel, tokens: Iterable[str]) -> float:
    result = classify(model, tokens)
    p = result["posterior"]
    return p if result["label"] == INFORMATIVE else 1.0 - p


def filter_corpus(model: EmnbModel, sentences) -> list:
    """Set the informative flag on every sentence; returns the informative subset."""
    informative = []
    for sentence in sentences:
        result = classify(model, [t.lemma for t in sentence.tokens])
        sentence.informative = result["label"] == INFORMATIVE
        if sentence.informative:
            informative.append(sentence)
    return informative


def load_seed_labels(path: str | Path) -> list[LabeledDoc]:
    """Read seed docs from JSONL: {"text": str, "label": "informative"|"non-informative"}."""
    from .preprocess import normalize_tokens

    docs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            label = rec.get("label")
            if label not in CLASSES:
                raise TrainingError(f"{path}:{line_no}: unknown label {label!r}")
            tokens = tuple(t.lemma for t in normalize_tokens(rec.get("text", "")))
            if tokens:
                docs.append(LabeledDoc(tokens=tokens, label=label))
    return docs
