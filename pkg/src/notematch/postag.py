"""Context-free part-of-speech tagging over a frozen lemma lexicon.

Only the three content-word buckets (NOUN, VERB, ADJ) matter downstream,
so a deterministic lexicon lookup with suffix fallbacks is enough; lemmas
the lexicon does not know fall back to OTHER. Regenerate the bundled
lexicon with scripts/build_lexicon.py.
"""

from __future__ import annotations

from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .preprocess import POS_TAGS, Token

NOUN_SUFFIXES = ("ness", "tion", "sion", "ment", "ity", "ship", "hood")
VERB_SUFFIXES = ("ize", "ise", "ify")
ADJ_SUFFIXES = ("ous", "ful", "able", "ible", "ive", "less", "ish")


class LexiconError(Exception):
    pass


class PosLexicon:
    """Lemma -> ordered candidate tag list, most frequent tag first."""

    def __init__(self, entries: dict[str, tuple[str, ...]]):
        if not entries:
            raise LexiconError("lexicon is empty")
        for lemma, tags in entries.items():
            bad = [t for t in tags if t not in POS_TAGS]
            if bad:
                raise LexiconError(f"lexicon entry {lemma!r} has unknown tags {bad}")
        self.entries = entries

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    def first_tag(self, lemma: str) -> str | None:
        tags = self.entries.get(lemma)
        return tags[0] if tags else None

    @classmethod
    def from_file(cls, path: str | Path) -> "PosLexicon":
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                if "\t" not in line:
                    raise LexiconError(f"{path}:{line_no}: expected 'lemma<TAB>TAG[,TAG...]'")
                lemma, tags = line.split("\t", 1)
                entries[lemma] = tuple(t.strip() for t in tags.split(","))
        return cls(entries)

    @classmethod
    def bundled(cls) -> "PosLexicon":
        with resources.as_file(
            resources.files("notematch.data").joinpath("pos_lexicon.tsv")
        ) as path:
            return cls.from_file(path)


def suffix_tag(lemma: str) -> str:
    """Fallback tag for lemmas the lexicon does not know."""
    if lemma.endswith(NOUN_SUFFIXES):
        return "NOUN"
    if lemma.endswith(VERB_SUFFIXES):
        return "VERB"
    if lemma.endswith(ADJ_SUFFIXES):
        return "ADJ"
    return "OTHER"


def tag(tokens: Sequence[Token], lexicon: PosLexicon) -> list[Token]:
    """Assign a pos to every token; deterministic and context-free."""
    out = []
    for token in tokens:
        pos = lexicon.first_tag(token.lemma) or suffix_tag(token.lemma)
        out.append(replace(token, pos=pos))
    return out
