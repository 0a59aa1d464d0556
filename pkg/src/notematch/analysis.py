"""Evaluation metrics over labeled matched pairs: hit ratio, roles, time intervals.

Labels are append-only JSONL; a partially written trailing line (crash
mid-append) is ignored on reload. Consensus is two-coder agreement on
(relevance, role), with an "adjudicator" annotator overriding pairs the
coders disagree on.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

RELEVANT = "relevant"
IRRELEVANT = "irrelevant"
ADJUDICATOR = "adjudicator"


class Role(Enum):
    FEATURE_REQUESTER = "feature_requester"
    BUG_REPORTER = "bug_reporter"
    COMPLAINER = "complainer"
    PRAISER = "praiser"
    QUALITY_ISSUE_RAISER = "quality_issue_raiser"
    DISPRAISER = "dispraiser"
    SUBSEQUENT_FEATURE_REQUESTER = "subsequent_feature_requester"
    QUESTIONER = "questioner"


ROLE_NAMES = tuple(r.value for r in Role)


class LabelError(Exception):
    pass


@dataclass(frozen=True)
class PairLabel:
    pair_id: str
    annotator: str
    relevance: str
    role: Optional[Role]
    labeled_at: str  # ISO-8601 timestamp

    def __post_init__(self):
        if self.relevance not in (RELEVANT, IRRELEVANT):
            raise LabelError(f"unknown relevance {self.relevance!r}")
        if self.role is not None and self.relevance != RELEVANT:
            raise LabelError("role is only allowed on relevant labels")

    def to_record(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "annotator": self.annotator,
            "relevance": self.relevance,
            "role": self.role.value if self.role else None,
            "labeled_at": self.labeled_at,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "PairLabel":
        role = rec.get("role")
        if role is not None:
            try:
                role = Role(role)
            except ValueError as exc:
                raise LabelError(f"unknown role {rec.get('role')!r}") from exc
        return cls(
            pair_id=rec["pair_id"],
            annotator=rec["annotator"],
            relevance=rec["relevance"],
            role=role,
            labeled_at=rec.get("labeled_at", ""),
        )


def load_labels(path: str | Path) -> list[PairLabel]:
    """Read a labels JSONL file, ignoring a partially written trailing line."""
    path = Path(path)
    if not path.exists():
        return []
    lines = path.read_text(encoding="utf-8").split("\n")
    labels = []
    for line_no, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            labels.append(PairLabel.from_record(json.loads(line)))
        except (json.JSONDecodeError, KeyError, LabelError) as exc:
            if line_no == len(lines) or (line_no == len(lines) - 1 and not lines[-1].strip()):
                continue  # torn trailing write
            raise LabelError(f"{path}:{line_no}: corrupt label: {exc}") from exc
    return labels


def append_label(path: str | Path, label: PairLabel) -> None:
    """Durably append one label (flushed and fsynced before returning)."""
    import os

    line = json.dumps(label.to_record(), ensure_ascii=False, sort_keys=True) + "\n"
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(line)
        fh.flush()
        os.fsync(fh.fileno())


# ---------------------------------------------------------------------------
# Consensus and the hit ratio
# ---------------------------------------------------------------------------

def consensus_labels(labels: Sequence[PairLabel]) -> tuple[list[PairLabel], list[str]]:
    """Resolve per-pair consensus; returns (consensus labels, unresolved pair ids).

    Coders agreeing on (relevance, role) form the consensus; otherwise the
    adjudicator's label wins; pairs with neither stay unresolved.
    """
    by_pair: dict[str, list[PairLabel]] = defaultdict(list)
    for label in labels:
        by_pair[label.pair_id].append(label)

    consensus = []
    unresolved = []
    for pid in sorted(by_pair):
        coders = [l for l in by_pair[pid] if l.annotator != ADJUDICATOR]
        adjudicated = [l for l in by_pair[pid] if l.annotator == ADJUDICATOR]
        decisions = {(l.relevance, l.role) for l in coders}
        if len(coders) >= 2 and len(decisions) == 1:
            consensus.append(coders[0])
        elif adjudicated:
            consensus.append(adjudicated[-1])
        elif len(coders) == 1:
            consensus.append(coders[0])
        else:
            unresolved.append(pid)
    return consensus, unresolved


def hit_ratio(labels: Sequence[PairLabel]) -> float:
    """Fraction of relevant pairs among all labeled pairs."""
    if not labels:
        raise LabelError("hit ratio undefined for an empty label set")
    relevant = sum(1 for l in labels if l.relevance == RELEVANT)
    return relevant / len(labels)


def role_distribution(labels: Sequence[PairLabel]) -> list[dict]:
    """Per-role count and percentage over relevant, role-bearing pairs."""
    roles = [l.role for l in labels if l.relevance == RELEVANT and l.role is not None]
    total = len(roles)
    counts = Counter(roles)
    return [
        {
            "role": role.value,
            "count": counts.get(role, 0),
            "percent": 100.0 * counts.get(role, 0) / total if total else 0.0,
        }
        for role in Role
    ]


# ---------------------------------------------------------------------------
# Temporal statistics
# ---------------------------------------------------------------------------

def time_interval(released_at: date, posted_at: date) -> int:
    """Whole days between a note's release date and its review's post date.

    Computed as release date minus post date; swapping the two dates
    negates the result. Same-day pairs yield 0.
    """
    return (released_at - posted_at).days


def interval_averages(deltas: Sequence[int]) -> tuple[float, float]:
    """Mean |delta| over the negative deltas and mean delta over the positives.

    Zero deltas contribute to neither average: the defining sums use
    strict inequalities, and a same-day pair sits on neither side.
    """
    before = [-d for d in deltas if d < 0]
    after = [d for d in deltas if d > 0]
    t_before = sum(before) / len(before) if before else 0.0
    t_after = sum(after) / len(after) if after else 0.0
    return (t_before, t_after)


def interval_histogram(deltas: Sequence[int], bin_width: int = 20) -> list[tuple[int, int]]:
    """Counts over left-closed bins [k*w, (k+1)*w) covering the data range."""
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    if not deltas:
        return []
    ks = [d // bin_width for d in deltas]
    counts = Counter(ks)
    lo, hi = min(ks), max(ks)
    return [(k * bin_width, counts.get(k, 0)) for k in range(lo, hi + 1)]


@dataclass
class IntervalStats:
    deltas: list[int]
    t_before_avg: float
    t_after_avg: float
    histogram: list[tuple[int, int]]

    @classmethod
    def from_deltas(cls, deltas: Sequence[int], bin_width: int = 20) -> "IntervalStats":
        before, after = interval_averages(deltas)
        return cls(
            deltas=list(deltas),
            t_before_avg=before,
            t_after_avg=after,
            histogram=interval_histogram(deltas, bin_width),
        )


# ---------------------------------------------------------------------------
# Inter-annotator agreement
# ---------------------------------------------------------------------------

def agreement(labels_a: Sequence[PairLabel], labels_b: Sequence[PairLabel]) -> dict:
    """Relevance-level agreement between two annotators over the same pairs."""
    a_by_pair = {l.pair_id: l for l in labels_a}
    b_by_pair = {l.pair_id: l for l in labels_b}
    if set(a_by_pair) != set(b_by_pair):
        only_a = sorted(set(a_by_pair) - set(b_by_pair))
        only_b = sorted(set(b_by_pair) - set(a_by_pair))
        raise LabelError(f"pair id sets differ (only A: {only_a[:5]}, only B: {only_b[:5]})")
    if not a_by_pair:
        raise LabelError("agreement undefined over zero pairs")

    n = len(a_by_pair)
    agree = 0
    a_relevant = 0
    b_relevant = 0
    disagreements = []
    for pid in sorted(a_by_pair):
        rel_a = a_by_pair[pid].relevance
        rel_b = b_by_pair[pid].relevance
        a_relevant += rel_a == RELEVANT
        b_relevant += rel_b == RELEVANT
        if rel_a == rel_b:
            agree += 1
        else:
            disagreements.append(pid)

    p_o = agree / n
    pa, pb = a_relevant / n, b_relevant / n
    p_e = pa * pb + (1 - pa) * (1 - pb)
    if math.isclose(p_o, 1.0):
        kappa = 1.0
    elif math.isclose(p_e, 1.0):
        kappa = 0.0
    else:
        kappa = (p_o - p_e) / (1 - p_e)
    return {
        "percent_agreement": p_o,
        "cohen_kappa": kappa,
        "disagreements": disagreements,
    }
