import json
import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from notematch.corpus import CorpusStore
from notematch.preprocess import ReleaseNoteSentence, ReviewSentence, Token


def write_jsonl(path, records):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
    return path


def review_rec(review_id, app_id="demoapp", posted_at="2019-05-01", body="Great app! Please add dark mode.",
               rating=4, title=None):
    return {
        "review_id": review_id, "app_id": app_id, "posted_at": posted_at,
        "rating": rating, "title": title, "body": body,
    }


def note_rec(note_id, app_id="demoapp", released_at="2019-06-01",
             raw_text="- Added dark mode\n- Fixed crash on startup", version="2.0"):
    return {
        "note_id": note_id, "app_id": app_id, "version": version,
        "released_at": released_at, "raw_text": raw_text,
    }


def app_rec(app_id="demoapp", name="Demo App", category="Music",
            first_release_date="2015-01-01"):
    return {
        "app_id": app_id, "name": name, "category": category,
        "first_release_date": first_release_date,
    }


def make_token(lemma, pos="OTHER", surface=None):
    return Token(surface=surface or lemma, lemma=lemma, pos=pos)


def make_note_sentence(sentence_id, lemmas, app_id="demoapp", released_at=date(2019, 6, 1),
                       note_id=None, text=None, kept=True):
    return ReleaseNoteSentence(
        sentence_id=sentence_id,
        note_id=note_id or sentence_id.split(":")[0],
        app_id=app_id,
        text=text or " ".join(lemmas),
        tokens=[make_token(l) for l in lemmas],
        released_at=released_at,
        kept=kept,
    )


def make_review_sentence(sentence_id, lemmas, app_id="demoapp", posted_at=date(2019, 5, 1),
                         review_id=None, text=None, informative=None):
    return ReviewSentence(
        sentence_id=sentence_id,
        review_id=review_id or sentence_id.split(":")[0],
        app_id=app_id,
        text=text or " ".join(lemmas),
        tokens=[make_token(l) for l in lemmas],
        posted_at=posted_at,
        informative=informative,
    )


@pytest.fixture
def corpus_store(tmp_path):
    return CorpusStore(tmp_path / "data")
