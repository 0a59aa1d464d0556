"""Similarity core: cosine, per-note top-N ranking, and the two-backend intersection.

The scan is exact brute force (dot products against the full candidate
matrix); a note sentence's high-confidence pairs are the candidates that
appear in both backends' top-N lists. Ties in similarity break by
ascending review-sentence id so reports are reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .embedding import SentenceVector, SentenceVectorStore


class MatchError(Exception):
    pass


def pair_id(rn_sentence_id: str, ur_sentence_id: str) -> str:
    digest = hashlib.sha1(
        json.dumps([rn_sentence_id, ur_sentence_id]).encode("utf-8")
    ).hexdigest()
    return digest[:16]


@dataclass
class MatchedPair:
    rn_sentence_id: str
    ur_sentence_id: str
    sims: dict[str, float] = field(default_factory=dict)
    ranks: dict[str, int] = field(default_factory=dict)

    @property
    def pair_id(self) -> str:
        return pair_id(self.rn_sentence_id, self.ur_sentence_id)

    def key(self) -> tuple[str, str]:
        return (self.rn_sentence_id, self.ur_sentence_id)


@dataclass
class MatchReport:
    rn_sentence_id: str
    n: int
    backends: list[str]
    top: dict[str, list[MatchedPair]]
    intersection: list[MatchedPair]
    skipped: dict[str, str] = field(default_factory=dict)


def cosine(v: np.ndarray, w: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise MatchError(f"dimension mismatch: {v.shape} vs {w.shape}")
    nv = np.linalg.norm(v)
    nw = np.linalg.norm(w)
    if nv == 0.0 or nw == 0.0:
        raise MatchError("cosine undefined for the zero vector")
    return float(np.clip(np.dot(v, w) / (nv * nw), -1.0, 1.0))


def top_n(rn: SentenceVector, reviews: SentenceVectorStore, n: int) -> list[MatchedPair]:
    """The n most-similar review sentences, ranked 1..n, ties by ascending id."""
    if n < 1:
        raise MatchError("n must be >= 1")
    if len(reviews) == 0:
        raise MatchError("review vector store is empty")
    if reviews.dim != rn.values.shape[0]:
        raise MatchError(
            f"backend dim {reviews.dim} does not match note vector dim {rn.values.shape[0]}"
        )

    matrix = reviews.matrix()
    norms = reviews.norms()
    rn_norm = np.linalg.norm(rn.values)
    if rn_norm == 0.0:
        raise MatchError("cosine undefined for the zero vector")
    sims = np.clip((matrix @ rn.values) / (norms * rn_norm), -1.0, 1.0)

    ids = np.asarray(reviews.ids())
    if n < len(sims):
        # keep every candidate tied with the n-th similarity, then tie-break by id
        part = np.argpartition(-sims, n - 1)
        kth = sims[part[n - 1]]
        candidates = np.flatnonzero(sims >= kth)
    else:
        candidates = np.arange(len(sims))
    order = candidates[np.lexsort((ids[candidates], -sims[candidates]))][:n]

    return [
        MatchedPair(
            rn_sentence_id=rn.sentence_id,
            ur_sentence_id=str(ids[idx]),
            sims={reviews.backend_id: float(sims[idx])},
            ranks={reviews.backend_id: rank},
        )
        for rank, idx in enumerate(order, 1)
    ]


def intersect(top_a: Sequence[MatchedPair], top_b: Sequence[MatchedPair]) -> list[MatchedPair]:
    """Pairs present in both top-N lists, ordered by rank under the first backend."""
    rn_ids = {p.rn_sentence_id for p in top_a} | {p.rn_sentence_id for p in top_b}
    if len(rn_ids) > 1:
        raise MatchError(f"top lists mix note sentences: {sorted(rn_ids)}")
    by_key = {p.key(): p for p in top_b}
    merged = []
    for pair in top_a:
        other = by_key.get(pair.key())
        if other is None:
            continue
        merged.append(
            MatchedPair(
                rn_sentence_id=pair.rn_sentence_id,
                ur_sentence_id=pair.ur_sentence_id,
                sims={**pair.sims, **other.sims},
                ranks={**pair.ranks, **other.ranks},
            )
        )
    return merged


def run_match(
    note_sentence_ids: Sequence[str],
    backends: dict[str, dict[str, SentenceVectorStore]],
    n: int,
) -> list[MatchReport]:
    """Match each note sentence against the informative review candidates.

    ``backends`` maps backend_id -> {"notes": store, "reviews": store},
    where both stores are already restricted to one app (kept note
    sentences; informative review sentences). A note sentence missing from
    a backend's note store was unencodable there and is skipped for that
    backend; the intersection requires every requested backend.
    """
    backend_ids = sorted(backends)
    if not backend_ids:
        raise MatchError("no backends requested")

    reports = []
    for rn_sid in note_sentence_ids:
        top: dict[str, list[MatchedPair]] = {}
        skipped: dict[str, str] = {}
        for backend_id in backend_ids:
            note_store = backends[backend_id]["notes"]
            review_store = backends[backend_id]["reviews"]
            if rn_sid not in note_store:
                skipped[backend_id] = "unencodable"
                continue
            top[backend_id] = top_n(note_store.vector(rn_sid), review_store, n)

        if len(backend_ids) >= 2 and all(b in top for b in backend_ids):
            intersection = top[backend_ids[0]]
            for backend_id in backend_ids[1:]:
                intersection = intersect(intersection, top[backend_id])
        else:
            intersection = []

        reports.append(
            MatchReport(
                rn_sentence_id=rn_sid,
                n=n,
                backends=list(backend_ids),
                top=top,
                intersection=intersection,
                skipped=skipped,
            )
        )
    return reports


def pairs_records(reports: Sequence[MatchReport]) -> list[dict]:
    """Flatten reports into pairs-file records (one per distinct pair)."""
    records = []
    for report in reports:
        in_intersection = {p.key() for p in report.intersection}
        merged: dict[tuple[str, str], MatchedPair] = {}
        for backend_id in sorted(report.top):
            for pair in report.top[backend_id]:
                existing = merged.get(pair.key())
                if existing is None:
                    merged[pair.key()] = MatchedPair(
                        rn_sentence_id=pair.rn_sentence_id,
                        ur_sentence_id=pair.ur_sentence_id,
                        sims=dict(pair.sims),
                        ranks=dict(pair.ranks),
                    )
                else:
                    existing.sims.update(pair.sims)
                    existing.ranks.update(pair.ranks)
        for key in sorted(merged):
            pair = merged[key]
            records.append(
                {
                    "pair_id": pair.pair_id,
                    "rn_sentence_id": pair.rn_sentence_id,
                    "ur_sentence_id": pair.ur_sentence_id,
                    "sims": {b: pair.sims[b] for b in sorted(pair.sims)},
                    "ranks": {b: pair.ranks[b] for b in sorted(pair.ranks)},
                    "in_intersection": key in in_intersection,
                }
            )
    return records


def match_summary(reports: Sequence[MatchReport]) -> dict:
    """Per-note and pooled intersection counts (both views are reported)."""
    per_note = {
        r.rn_sentence_id: {
            "intersection": len(r.intersection),
            "top_sizes": {b: len(pairs) for b, pairs in sorted(r.top.items())},
            "skipped": dict(sorted(r.skipped.items())),
        }
        for r in reports
    }
    return {
        "notes_matched": len(reports),
        "pooled_intersection": sum(len(r.intersection) for r in reports),
        "per_note": per_note,
    }
