"""Sentence splitting, token normalization, and release-note de-duplication.

All functions here are pure and deterministic: review splitting is a
rule-based terminal-punctuation splitter with an abbreviation guard, and
lemmatization is a frozen suffix-rule table plus an irregular-form
lexicon. Determinism is what makes the golden fixtures and duplicate keys
stable across runs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from datetime import date
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

if TYPE_CHECKING:
    from .corpus import ReleaseNote, UserReview

REVIEW_SENTENCES_FILE = "review_sentences.jsonl"
NOTE_SENTENCES_FILE = "note_sentences.jsonl"

POS_TAGS = ("NOUN", "VERB", "ADJ", "OTHER")


class PreprocessError(Exception):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str = "OTHER"

    def to_record(self) -> dict:
        return {"surface": self.surface, "lemma": self.lemma, "pos": self.pos}

    @classmethod
    def from_record(cls, rec: dict) -> "Token":
        return cls(surface=rec["surface"], lemma=rec["lemma"], pos=rec["pos"])


@dataclass
class ReviewSentence:
    sentence_id: str
    review_id: str
    app_id: str
    text: str
    tokens: list[Token]
    posted_at: date
    informative: Optional[bool] = None

    def to_record(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "review_id": self.review_id,
            "app_id": self.app_id,
            "text": self.text,
            "tokens": [t.to_record() for t in self.tokens],
            "posted_at": self.posted_at.isoformat(),
            "informative": self.informative,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReviewSentence":
        return cls(
            sentence_id=rec["sentence_id"],
            review_id=rec["review_id"],
            app_id=rec["app_id"],
            text=rec["text"],
            tokens=[Token.from_record(t) for t in rec["tokens"]],
            posted_at=date.fromisoformat(rec["posted_at"]),
            informative=rec.get("informative"),
        )


@dataclass
class ReleaseNoteSentence:
    sentence_id: str
    note_id: str
    app_id: str
    text: str
    tokens: list[Token]
    released_at: date
    kept: bool = True

    def to_record(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "note_id": self.note_id,
            "app_id": self.app_id,
            "text": self.text,
            "tokens": [t.to_record() for t in self.tokens],
            "released_at": self.released_at.isoformat(),
            "kept": self.kept,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ReleaseNoteSentence":
        return cls(
            sentence_id=rec["sentence_id"],
            note_id=rec["note_id"],
            app_id=rec["app_id"],
            text=rec["text"],
            tokens=[Token.from_record(t) for t in rec["tokens"]],
            released_at=date.fromisoformat(rec["released_at"]),
            kept=rec["kept"],
        )


# ---------------------------------------------------------------------------
# Review sentence splitting
# ---------------------------------------------------------------------------

# Words before a period that do not end a sentence.
ABBREVIATIONS = {
    "e.g", "i.e", "etc", "vs", "mr", "mrs", "ms", "dr", "st", "u.s", "u.k",
    "approx", "min", "max", "a.m", "p.m", "inc", "ltd", "co", "no", "ver",
}

_BOUNDARY_RE = re.compile(r"[.!?]+")


def _is_boundary(text: str, end: int) -> bool:
    """True when the punctuation run ending at ``end`` closes a sentence."""
    rest = text[end:]
    if not rest.strip():
        return True
    match = re.match(r'[\s"\')\]]*(\S)', rest)
    if match is None:
        return True
    follower = match.group(1)
    if not (follower.isupper() or follower == '"' or follower == "'"):
        return False
    return True


def _ends_with_abbreviation(chunk: str) -> bool:
    words = chunk.lower().split()
    if not words:
        return False
    return words[-1].rstrip(".").lstrip("(\"'") in ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Split plain text into sentences on terminal punctuation.

    A run of {., !, ?} ends a sentence when followed by whitespace and an
    upper-case letter (or end of text), unless the preceding word is on the
    abbreviation guard list. Text with no boundary is one sentence.
    """
    sentences = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        end = match.end()
        if not _is_boundary(text, end):
            continue
        chunk = text[start:end]
        if "." in match.group() and _ends_with_abbreviation(text[start:match.start()]):
            continue
        chunk = chunk.strip()
        if chunk:
            sentences.append(chunk)
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def split_review_sentences(review: "UserReview") -> list[ReviewSentence]:
    """Split one review into sentences; the title, when present, is sentence 0."""
    parts: list[str] = []
    if review.title and review.title.strip():
        parts.append(review.title.strip())
    parts.extend(split_sentences(review.body))
    return [
        ReviewSentence(
            sentence_id=f"{review.review_id}:{i}",
            review_id=review.review_id,
            app_id=review.app_id,
            text=text,
            tokens=[],
            posted_at=review.posted_at,
        )
        for i, text in enumerate(parts)
    ]


_BULLET_RE = re.compile(r"^[\s\-\*·•‣▪●⁃]+")


def split_note_sentences(note: "ReleaseNote") -> list[ReleaseNoteSentence]:
    """Split a release note on line breaks, stripping leading bullet glyphs."""
    sentences = []
    for line in note.raw_text.splitlines():
        line = _BULLET_RE.sub("", line).strip()
        if not line:
            continue
        sentences.append(
            ReleaseNoteSentence(
                sentence_id=f"{note.note_id}:{len(sentences)}",
                note_id=note.note_id,
                app_id=note.app_id,
                text=line,
                tokens=[],
                released_at=note.released_at,
            )
        )
    return sentences


# ---------------------------------------------------------------------------
# Token normalization
# ---------------------------------------------------------------------------

def _load_stopwords() -> frozenset[str]:
    text = resources.files("notematch.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


STOPWORDS = _load_stopwords()

# Irregular forms and rule-table traps (words the suffix rules would mangle).
LEMMA_EXCEPTIONS = {
    "added": "add", "always": "always", "amazing": "amazing", "annoying": "annoying",
    "anything": "anything", "applied": "apply", "apps": "app", "ads": "ads",
    "best": "good", "better": "good", "bought": "buy", "broke": "break",
    "broken": "break", "browser": "browser", "came": "come", "caused": "cause",
    "causing": "cause", "changed": "change", "changing": "change",
    "charged": "charge", "charging": "charge", "children": "child",
    "chose": "choose", "chosen": "choose", "closed": "close", "closing": "close",
    "coming": "come", "compared": "compare", "cover": "cover", "crashes": "crash",
    "created": "create", "creating": "create", "data": "data", "deleted": "delete",
    "deleting": "delete", "disabled": "disable", "disliked": "dislike",
    "enabled": "enable", "everything": "everything", "feet": "foot",
    "fell": "fall", "filter": "filter", "fixes": "fix", "folder": "folder",
    "forced": "force", "found": "find", "freezing": "freeze", "froze": "freeze",
    "frozen": "freeze", "gave": "give", "getting": "get", "given": "give",
    "goes": "go", "going": "go", "gone": "go", "got": "get", "gotten": "get",
    "happened": "happen", "hated": "hate", "held": "hold", "honest": "honest",
    "ignored": "ignore", "improved": "improve", "improving": "improve",
    "increased": "increase", "interest": "interest", "introduced": "introduce",
    "introducing": "introduce", "kept": "keep", "knew": "know", "known": "know",
    "latest": "late", "left": "leave", "letting": "let", "liked": "like",
    "listened": "listen", "lost": "lose", "loved": "love", "loving": "love",
    "made": "make", "making": "make", "managed": "manage", "member": "member",
    "men": "man", "mentioned": "mention", "morning": "morning",
    "moved": "move", "movies": "movie", "moving": "move", "muted": "mute",
    "named": "name", "news": "news", "nothing": "nothing", "noticed": "notice",
    "number": "number", "offer": "offer", "opened": "open", "order": "order",
    "paid": "pay", "paused": "pause", "people": "people", "perhaps": "perhaps",
    "placed": "place", "playlists": "playlist", "promised": "promise",
    "purchased": "purchase", "purchasing": "purchase", "put": "put",
    "ran": "run", "rated": "rate", "rating": "rating", "read": "read",
    "received": "receive", "receiving": "receive", "refused": "refuse",
    "released": "release", "releasing": "release", "remember": "remember",
    "removed": "remove", "removing": "remove", "replaced": "replace",
    "request": "request", "required": "require", "resolved": "resolve",
    "restored": "restore", "running": "run", "said": "say", "sat": "sit",
    "saved": "save", "saving": "save", "saw": "see", "scheduled": "schedule",
    "seen": "see", "sent": "send", "server": "server", "setting": "setting",
    "settings": "setting", "shared": "share", "sharing": "share",
    "shipped": "ship", "shipping": "shipping", "shopping": "shopping",
    "shown": "show", "shut": "shut", "sold": "sell", "solved": "solve",
    "solving": "solve", "something": "something", "songs": "song",
    "speed": "speed", "spent": "spend", "spoke": "speak", "stored": "store",
    "stories": "story", "stuck": "stick", "subscribed": "subscribe",
    "suggest": "suggest", "super": "super", "taken": "take", "taking": "take",
    "thought": "think", "timer": "timer", "told": "tell", "took": "take",
    "tried": "try", "typed": "type", "typing": "type",
    "understood": "understand", "updated": "update", "updates": "update",
    "updating": "update", "upgraded": "upgrade", "used": "use", "user": "user",
    "users": "user", "uses": "use", "using": "use", "version": "version",
    "versions": "version", "voted": "vote", "wasted": "waste", "went": "go",
    "women": "woman", "wonder": "wonder", "worse": "bad", "worst": "bad",
    "written": "write", "wrote": "write",
}

_DOUBLED = set("bdgmnprt")
_SIBILANT_ENDINGS = ("ch", "sh", "s", "x", "z")


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-1] in _DOUBLED:
        return stem[:-1]
    return stem


def lemmatize(token: str) -> str:
    """Reduce an inflected form to a lemma using the frozen suffix-rule table.

    Rules, in order: irregular lexicon; plural -ies/-es/-s; past -ied/-ed;
    progressive -ing; comparative -ier/-er and superlative -iest/-est.
    Minimum stem lengths keep short words intact. The table is consciously
    coarse: both sides of a match are normalized by the same rules, so the
    keys stay consistent even when a lemma is not dictionary-perfect.
    """
    if token in LEMMA_EXCEPTIONS:
        return LEMMA_EXCEPTIONS[token]
    if token.endswith("ies") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("es") and len(token) >= 4:
        stem = token[:-2]
        if stem.endswith(_SIBILANT_ENDINGS):
            return stem
        return token[:-1]
    if token.endswith("s") and len(token) >= 4 and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    if token.endswith("ied") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("ed") and len(token) - 2 >= 3:
        return _undouble(token[:-2])
    if token.endswith("ing") and len(token) - 3 >= 3:
        return _undouble(token[:-3])
    if token.endswith("iest") and len(token) >= 6:
        return token[:-4] + "y"
    if token.endswith("est") and len(token) - 3 >= 4:
        return _undouble(token[:-3])
    if token.endswith("ier") and len(token) >= 5:
        return token[:-3] + "y"
    if token.endswith("er") and len(token) - 2 >= 4:
        return _undouble(token[:-2])
    return token


_HASHTAG_RE = re.compile(r"#(?=\w)")
_NON_ASCII_RE = re.compile(r"[^\x00-\x7f]+")
_APOSTROPHE_RE = re.compile(r"['’]")
_PUNCT_RE = re.compile(r"[^a-z0-9\s]+")


def normalize_tokens(text: str, strip_digits: bool = True) -> list[Token]:
    """Normalize raw text into the lemma token stream.

    Lowercases, expands "#word" to "hashtag word", strips non-ASCII
    symbols and punctuation, drops digit-only tokens (configurable) and
    stopwords, then lemmatizes. Tags are left as OTHER for the tagger.
    """
    text = text.lower()
    text = _HASHTAG_RE.sub(" hashtag ", text)
    text = _NON_ASCII_RE.sub(" ", text)
    text = _APOSTROPHE_RE.sub("", text)
    text = _PUNCT_RE.sub(" ", text)

    tokens = []
    for word in text.split():
        if strip_digits and word.isdigit():
            continue
        if word in STOPWORDS:
            continue
        lemma = lemmatize(word)
        if not lemma:
            continue
        tokens.append(Token(surface=word, lemma=lemma, pos="OTHER"))
    return tokens


# ---------------------------------------------------------------------------
# De-duplication and repetition rate
# ---------------------------------------------------------------------------

def sentence_key(sentence) -> tuple[str, ...]:
    """Duplicate key: the normalized lemma sequence of the sentence."""
    return tuple(t.lemma for t in sentence.tokens)


def dedup_note_sentences(sentences: Sequence[ReleaseNoteSentence]) -> list[ReleaseNoteSentence]:
    """Set kept=True on the first occurrence of each normalized key.

    Input must already be ordered chronologically (released_at, note_id,
    position); only the first occurrence of each key survives, which
    removes perfunctory repeats, greeting boilerplate, and re-announced
    major updates in one pass. Stable and idempotent.
    """
    seen: set[tuple[str, ...]] = set()
    out = []
    for sentence in sentences:
        key = sentence_key(sentence)
        keep = key not in seen
        seen.add(key)
        out.append(replace(sentence, kept=keep))
    return out


def repetition_rate(sentences: Sequence) -> float:
    """1 - unique normalized keys / total sentences, over a non-empty list."""
    if not sentences:
        raise PreprocessError("repetition rate undefined for an empty sentence list")
    keys = {sentence_key(s) for s in sentences}
    return 1.0 - len(keys) / len(sentences)


# ---------------------------------------------------------------------------
# Sentence persistence
# ---------------------------------------------------------------------------

class SentenceStore:
    """Review and note sentences persisted as JSONL mirroring the type fields."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.review_sentences: dict[str, ReviewSentence] = {}
        self.note_sentences: dict[str, ReleaseNoteSentence] = {}
        self._load()

    def _load(self) -> None:
        self.review_sentences = {
            s.sentence_id: s
            for s in self._read(REVIEW_SENTENCES_FILE, ReviewSentence.from_record)
        }
        self.note_sentences = {
            s.sentence_id: s
            for s in self._read(NOTE_SENTENCES_FILE, ReleaseNoteSentence.from_record)
        }

    def _read(self, filename: str, parse):
        path = self.data_dir / filename
        if not path.exists():
            return []
        out = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(parse(json.loads(line)))
        return out

    def replace_app_sentences(
        self,
        app_id: str,
        review_sentences: Iterable[ReviewSentence],
        note_sentences: Iterable[ReleaseNoteSentence],
    ) -> None:
        self.review_sentences = {
            k: v for k, v in self.review_sentences.items() if v.app_id != app_id
        }
        self.note_sentences = {
            k: v for k, v in self.note_sentences.items() if v.app_id != app_id
        }
        for s in review_sentences:
            self.review_sentences[s.sentence_id] = s
        for s in note_sentences:
            self.note_sentences[s.sentence_id] = s
        self.save()

    def save(self) -> None:
        from .corpus import canonical_json

        def sort_key(s):
            parent = getattr(s, "review_id", None) or getattr(s, "note_id")
            return (s.app_id, parent, s.sentence_id)

        with open(self.data_dir / REVIEW_SENTENCES_FILE, "w", encoding="utf-8") as fh:
            for s in sorted(self.review_sentences.values(), key=sort_key):
                fh.write(canonical_json(s.to_record()) + "\n")
        with open(self.data_dir / NOTE_SENTENCES_FILE, "w", encoding="utf-8") as fh:
            for s in sorted(self.note_sentences.values(), key=sort_key):
                fh.write(canonical_json(s.to_record()) + "\n")

    def review_sentences_for_app(self, app_id: str) -> list[ReviewSentence]:
        return [s for s in self.review_sentences.values() if s.app_id == app_id]

    def note_sentences_for_app(self, app_id: str) -> list[ReleaseNoteSentence]:
        return [s for s in self.note_sentences.values() if s.app_id == app_id]

    def informative_review_sentences(self, app_id: str) -> list[ReviewSentence]:
        return [s for s in self.review_sentences_for_app(app_id) if s.informative]

    def kept_note_sentences(self, app_id: str) -> list[ReleaseNoteSentence]:
        return [s for s in self.note_sentences_for_app(app_id) if s.kept]
