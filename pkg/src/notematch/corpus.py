"""Data model, JSONL ingestion, and persistence for apps, release notes, and reviews.

Storage is append-only JSONL, one file per entity type under a data
directory, with an in-memory index rebuilt on load. Records are written in
a canonical form (sorted keys, compact separators) so that export
round-trips byte for byte.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Optional

APPS_FILE = "apps.jsonl"
REVIEWS_FILE = "reviews.jsonl"
NOTES_FILE = "notes.jsonl"

MIN_AGE_DAYS = 3 * 365  # released for at least three years
MAX_REPETITION_RATE = 0.80
DEFAULT_MIN_NOTES = 50
DEFAULT_MIN_REVIEWS = 10_000

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


class CorpusError(Exception):
    """Invalid corpus input or state (user-correctable)."""


class UnknownAppError(CorpusError):
    pass


def parse_iso_date(value: str) -> date:
    """Parse a strict YYYY-MM-DD calendar date; raises CorpusError otherwise."""
    if not isinstance(value, str) or not _DATE_RE.match(value):
        raise CorpusError(f"not a YYYY-MM-DD date: {value!r}")
    try:
        return date.fromisoformat(value)
    except ValueError as exc:
        raise CorpusError(f"invalid calendar date: {value!r}") from exc


def canonical_json(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class AppRecord:
    app_id: str
    name: str
    category: str
    first_release_date: Optional[date]

    def to_record(self) -> dict:
        return {
            "app_id": self.app_id,
            "name": self.name,
            "category": self.category,
            "first_release_date": self.first_release_date.isoformat()
            if self.first_release_date
            else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "AppRecord":
        for key in ("app_id", "name", "category"):
            if not isinstance(rec.get(key), str) or not rec[key]:
                raise CorpusError(f"app record missing string field {key!r}")
        frd = rec.get("first_release_date")
        return cls(
            app_id=rec["app_id"],
            name=rec["name"],
            category=rec["category"],
            first_release_date=parse_iso_date(frd) if frd is not None else None,
        )


@dataclass(frozen=True)
class UserReview:
    review_id: str
    app_id: str
    posted_at: date
    rating: Optional[int]
    title: Optional[str]
    body: str

    def to_record(self) -> dict:
        return {
            "review_id": self.review_id,
            "app_id": self.app_id,
            "posted_at": self.posted_at.isoformat(),
            "rating": self.rating,
            "title": self.title,
            "body": self.body,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "UserReview":
        for key in ("review_id", "app_id", "body"):
            if not isinstance(rec.get(key), str) or not rec[key]:
                raise CorpusError(f"review missing non-empty string field {key!r}")
        if not rec["body"].strip():
            raise CorpusError("review body is blank")
        rating = rec.get("rating")
        if rating is not None:
            if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
                raise CorpusError(f"rating out of range [1,5]: {rating!r}")
        title = rec.get("title")
        if title is not None and not isinstance(title, str):
            raise CorpusError("title must be a string or null")
        return cls(
            review_id=rec["review_id"],
            app_id=rec["app_id"],
            posted_at=parse_iso_date(rec.get("posted_at")),
            rating=rating,
            title=title,
            body=rec["body"],
        )


@dataclass(frozen=True)
class ReleaseNote:
    note_id: str
    app_id: str
    version: Optional[str]
    released_at: date
    raw_text: str

    def to_record(self) -> dict:
        return {
            "note_id": self.note_id,
            "app_id": self.app_id,
            "version": self.version,
            "released_at": self.released_at.isoformat(),
            "raw_text": self.raw_text,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReleaseNote":
        for key in ("note_id", "app_id", "raw_text"):
            if not isinstance(rec.get(key), str) or not rec[key]:
                raise CorpusError(f"note missing non-empty string field {key!r}")
        if not rec["raw_text"].strip():
            raise CorpusError("note raw_text is blank")
        version = rec.get("version")
        if version is not None and not isinstance(version, str):
            raise CorpusError("version must be a string or null")
        return cls(
            note_id=rec["note_id"],
            app_id=rec["app_id"],
            version=version,
            released_at=parse_iso_date(rec.get("released_at")),
            raw_text=rec["raw_text"],
        )


@dataclass(frozen=True)
class Rejection:
    line_no: int
    reason: str


@dataclass
class IngestReport:
    accepted: int
    rejections: list[Rejection]

    @property
    def rejected(self) -> int:
        return len(self.rejections)


class CorpusStore:
    """Apps, reviews, and release notes persisted as append-only JSONL.

    The loaded index is immutable from the readers' point of view;
    ingestion is single-writer. Ingesting a file twice accepts 0 new
    records (duplicate ids are rejected, which makes ingestion idempotent).
    """

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.apps: dict[str, AppRecord] = {}
        self.reviews: dict[str, UserReview] = {}
        self.notes: dict[str, ReleaseNote] = {}
        self._load()

    # -- loading ------------------------------------------------------------

    def _load(self) -> None:
        for app in self._read_entity(APPS_FILE, AppRecord.from_record):
            self.apps[app.app_id] = app
        for review in self._read_entity(REVIEWS_FILE, UserReview.from_record):
            self.reviews[review.review_id] = review
        for note in self._read_entity(NOTES_FILE, ReleaseNote.from_record):
            self.notes[note.note_id] = note

    def _read_entity(self, filename: str, parse) -> Iterable:
        path = self.data_dir / filename
        if not path.exists():
            return []
        out = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    out.append(parse(json.loads(line)))
                except (json.JSONDecodeError, CorpusError) as exc:
                    raise CorpusError(f"{path}:{line_no}: corrupt record: {exc}") from exc
        return out

    # -- ingestion ----------------------------------------------------------

    def ingest_apps(self, path: str | Path) -> IngestReport:
        return self._ingest(path, AppRecord.from_record, self.apps, "app_id", APPS_FILE)

    def ingest_reviews(self, path: str | Path, app_id: str) -> IngestReport:
        return self._ingest(
            path, UserReview.from_record, self.reviews, "review_id", REVIEWS_FILE, app_id=app_id
        )

    def ingest_release_notes(self, path: str | Path, app_id: str) -> IngestReport:
        return self._ingest(
            path, ReleaseNote.from_record, self.notes, "note_id", NOTES_FILE, app_id=app_id
        )

    def _ingest(self, path, parse, index, id_field, filename, app_id=None) -> IngestReport:
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise CorpusError(f"cannot read {path}: {exc}") from exc

        accepted = []
        accepted_ids: set[str] = set()
        rejections = []
        for line_no, line in enumerate(lines, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = parse(json.loads(line))
            except json.JSONDecodeError as exc:
                rejections.append(Rejection(line_no, f"malformed JSON: {exc.msg}"))
                continue
            except CorpusError as exc:
                rejections.append(Rejection(line_no, str(exc)))
                continue

            rec_id = getattr(rec, id_field)
            if rec_id in index or rec_id in accepted_ids:
                rejections.append(Rejection(line_no, f"duplicate {id_field} {rec_id!r}"))
                continue
            if app_id is not None and rec.app_id != app_id:
                rejections.append(
                    Rejection(line_no, f"app_id {rec.app_id!r} does not match {app_id!r}")
                )
                continue
            predates = self._predates_first_release(rec)
            if predates:
                rejections.append(Rejection(line_no, predates))
                continue
            accepted.append(rec)
            accepted_ids.add(rec_id)

        with open(self.data_dir / filename, "a", encoding="utf-8") as fh:
            for rec in accepted:
                fh.write(canonical_json(rec.to_record()) + "\n")
        for rec in accepted:
            index[getattr(rec, id_field)] = rec
        return IngestReport(accepted=len(accepted), rejections=rejections)

    def _predates_first_release(self, rec) -> Optional[str]:
        app = self.apps.get(getattr(rec, "app_id", None))
        if app is None or app.first_release_date is None:
            return None
        when = getattr(rec, "posted_at", None) or getattr(rec, "released_at", None)
        if when is not None and when < app.first_release_date:
            return f"dated {when.isoformat()}, before first release {app.first_release_date.isoformat()}"
        return None

    # -- queries ------------------------------------------------------------

    def require_app(self, app_id: str) -> AppRecord:
        if app_id not in self.apps:
            raise UnknownAppError(f"unknown app_id {app_id!r}")
        return self.apps[app_id]

    def reviews_for_app(self, app_id: str) -> list[UserReview]:
        return [r for r in self.reviews.values() if r.app_id == app_id]

    def notes_for_app(self, app_id: str) -> list[ReleaseNote]:
        return [n for n in self.notes.values() if n.app_id == app_id]

    def app_ids(self) -> list[str]:
        ids = set(self.apps)
        ids.update(r.app_id for r in self.reviews.values())
        ids.update(n.app_id for n in self.notes.values())
        return sorted(ids)

    # -- export -------------------------------------------------------------

    def export(self, entity: str, out_path: str | Path) -> int:
        """Write all records of one entity type as canonical JSONL; returns count."""
        sources = {
            "apps": (self.apps, APPS_FILE),
            "reviews": (self.reviews, REVIEWS_FILE),
            "notes": (self.notes, NOTES_FILE),
        }
        if entity not in sources:
            raise CorpusError(f"unknown entity {entity!r}; expected one of {sorted(sources)}")
        index, filename = sources[entity]
        src = self.data_dir / filename
        out_path = Path(out_path)
        if src.exists():
            out_path.write_bytes(src.read_bytes())
        else:
            out_path.write_text("", encoding="utf-8")
        return len(index)


def app_eligibility_report(
    store: CorpusStore,
    note_sentences,
    app_id: str,
    as_of: Optional[date] = None,
    min_notes: int = DEFAULT_MIN_NOTES,
    min_reviews: int = DEFAULT_MIN_REVIEWS,
) -> dict:
    """Compute the app-selection eligibility metrics and flags.

    ``note_sentences`` is the app's full (pre-deduplication) release-note
    sentence list; the repetition rate is computed over it. The flags are
    informational, not a hard gate: the sentence-level repetition metric is
    strict and well-curated apps can exceed the 0.80 threshold.
    """
    from . import preprocess  # local import; preprocess depends on corpus types

    app = store.require_app(app_id)
    as_of = as_of or date.today()

    age_days = None
    if app.first_release_date is not None:
        age_days = (as_of - app.first_release_date).days

    note_count = len(store.notes_for_app(app_id))
    review_count = len(store.reviews_for_app(app_id))

    sentences = [s for s in note_sentences if s.app_id == app_id]
    repetition = preprocess.repetition_rate(sentences) if sentences else None

    return {
        "app_id": app_id,
        "age_days": age_days,
        "note_count": note_count,
        "review_count": review_count,
        "sentence_repetition_rate": repetition,
        "passes_IC1_1": age_days is not None and age_days >= MIN_AGE_DAYS,
        "passes_IC1_2": repetition is not None and repetition < MAX_REPETITION_RATE,
        "passes_IC1_3": note_count >= min_notes and review_count >= min_reviews,
    }
