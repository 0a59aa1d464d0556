"""Reference implementations the tests check the real code against.

These stay deliberately naive (full sorts, straight-line arithmetic,
dict-of-dicts counting) and independent of the package internals.
"""

from __future__ import annotations

import math

import numpy as np


def brute_force_top_n(rn_vector, ids, matrix, n):
    """Full-sort oracle for top_n: list of (ur_id, sim) ranked per the tie rule."""
    sims = []
    for sid, row in zip(ids, matrix):
        num = float(np.dot(row, rn_vector))
        denom = float(np.linalg.norm(row) * np.linalg.norm(rn_vector))
        sims.append((sid, max(-1.0, min(1.0, num / denom))))
    sims.sort(key=lambda kv: (-kv[1], kv[0]))
    return sims[:n]


def nb_oracle(labeled_docs, alpha=1.0):
    """Hand-rolled smoothed multinomial NB over (tokens, label) pairs.

    Returns a closure: doc tokens -> {label: posterior}.
    """
    labels = sorted({label for _, label in labeled_docs})
    vocab = sorted({w for tokens, _ in labeled_docs for w in tokens})
    doc_counts = {c: 0 for c in labels}
    word_counts = {c: {w: 0 for w in vocab} for c in labels}
    for tokens, label in labeled_docs:
        doc_counts[label] += 1
        for w in tokens:
            word_counts[label][w] += 1

    total_docs = sum(doc_counts.values())
    priors = {c: doc_counts[c] / total_docs for c in labels}
    likelihood = {}
    for c in labels:
        total = sum(word_counts[c].values())
        likelihood[c] = {
            w: (word_counts[c][w] + alpha) / (total + alpha * len(vocab)) for w in vocab
        }

    def posterior(tokens):
        log_scores = {}
        for c in labels:
            score = math.log(priors[c])
            for w in tokens:
                if w in likelihood[c]:
                    score += math.log(likelihood[c][w])
            log_scores[c] = score
        hi = max(log_scores.values())
        exp = {c: math.exp(s - hi) for c, s in log_scores.items()}
        z = sum(exp.values())
        return {c: exp[c] / z for c in labels}

    return posterior


def encode_reference(model, tokens, w_verb, w_noun, w_adj):
    """Straight-line per-bucket means and weighted sum (the Eq-style oracle)."""
    buckets = {"VERB": [], "NOUN": [], "ADJ": []}
    for token in tokens:
        if token.pos in buckets:
            vec = model.vector(token.lemma)
            if vec is not None:
                buckets[token.pos].append(np.asarray(vec, dtype=np.float64))
    weights = {"VERB": w_verb, "NOUN": w_noun, "ADJ": w_adj}
    present = [pos for pos in ("VERB", "NOUN", "ADJ") if buckets[pos]]
    if not present:
        return None
    weight_sum = sum(weights[pos] for pos in present)
    if weight_sum == 0:
        return None
    out = np.zeros(model.dim, dtype=np.float64)
    for pos in present:
        mean = sum(buckets[pos]) / len(buckets[pos])
        out = out + (weights[pos] / weight_sum) * mean
    if not np.any(out):
        return None
    return out


def kappa_reference(pairs_ab):
    """Cohen's kappa over [(label_a, label_b)] with two categories."""
    n = len(pairs_ab)
    agree = sum(1 for a, b in pairs_ab if a == b)
    pa = sum(1 for a, _ in pairs_ab if a == "relevant") / n
    pb = sum(1 for _, b in pairs_ab if b == "relevant") / n
    p_o = agree / n
    p_e = pa * pb + (1 - pa) * (1 - pb)
    if p_o == 1.0:
        return 1.0
    return (p_o - p_e) / (1 - p_e)
