"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion; a failing criterion fails its test.
"""

import itertools
import time

import numpy as np
import pytest

from notematch.analysis import (
    IRRELEVANT,
    RELEVANT,
    PairLabel,
    hit_ratio,
    interval_averages,
    interval_histogram,
    time_interval,
)
from notematch.embedding import (
    PosWeights,
    SentenceVectorStore,
    SkipgramConfig,
    WordEmbeddingModel,
    encode_sentence,
    import_external_vectors,
    train_skipgram,
)
from notematch.informative import (
    INFORMATIVE,
    NON_INFORMATIVE,
    EmnbConfig,
    LabeledDoc,
    classify,
    train_emnb,
)
from notematch.matcher import cosine, intersect, run_match, top_n
from notematch.preprocess import Token

from conftest import make_token
from helpers import brute_force_top_n, encode_reference, nb_oracle

from datetime import date


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


def fake_labels(relevant, total):
    labels = [PairLabel(f"p{i}", "consensus", RELEVANT, None, "") for i in range(relevant)]
    labels += [PairLabel(f"q{i}", "consensus", IRRELEVANT, None, "")
               for i in range(total - relevant)]
    return labels


# --------------------------------------------------------------------------
# Criterion 1: metric fixtures reproduce every published hit-ratio row
# --------------------------------------------------------------------------

PER_MODEL_ROWS = [
    # (hit, total, published) for the three per-model blocks
    (64, 240, 0.267), (120, 240, 0.500), (42, 240, 0.175),
    (4, 240, 0.017), (186, 240, 0.775), (416, 1200, 0.347),
    (79, 240, 0.329), (123, 240, 0.513), (44, 240, 0.183),
    (8, 240, 0.033), (171, 240, 0.713), (425, 1200, 0.354),
    (29, 47, 0.617), (53, 69, 0.768), (17, 51, 0.333),
    (4, 80, 0.050), (52, 54, 0.963), (155, 301, 0.515),
]
POOLED_ROWS = [
    (121, 222, 0.545), (157, 191, 0.822), (172, 206, 0.835),
    (129, 223, 0.578), (128, 142, 0.901), (707, 984, 0.718),
]


def test_metric_fixtures_hit_ratio_tables():
    start = time.perf_counter()
    for hit, total, published in PER_MODEL_ROWS + POOLED_ROWS:
        value = hit_ratio(fake_labels(hit, total))
        assert abs(value - hit / total) <= 1e-9, (hit, total)
        assert abs(value - published) <= 5e-4 + 1e-12, (hit, total, published)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    ok(f"hit_ratio reproduces all {len(PER_MODEL_ROWS) + len(POOLED_ROWS)} published rows "
       f"(exact to 1e-9, published to 5e-4) in {elapsed:.3f}s")


# --------------------------------------------------------------------------
# Criterion 2: top_n / intersect match brute-force oracles on 200 instances
# --------------------------------------------------------------------------

def test_oracle_equivalence_top_n_and_intersect():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for instance in range(200):
        count = int(rng.integers(1, 501))
        dim = int(rng.integers(2, 17))
        n = int(rng.integers(1, 120))
        ids = [f"r{int(x):05d}" for x in rng.permutation(count)]
        matrix = rng.normal(size=(count, dim))
        # plant exact duplicates so ties actually occur
        if count >= 10:
            matrix[3] = matrix[7]
            matrix[2] = matrix[5] * 2.0  # same direction, same cosine
        store = SentenceVectorStore.from_matrix("b", ids, matrix)
        query = rng.normal(size=dim)

        got = top_n(store.vector(ids[0]).__class__(
            sentence_id="n:0", backend_id="b", values=query), store, n)
        expected = brute_force_top_n(query, ids, matrix, n)
        assert [p.ur_sentence_id for p in got] == [sid for sid, _ in expected], instance

        keep_a = rng.integers(1, min(count, 40) + 1)
        keep_b = rng.integers(1, min(count, 40) + 1)
        set_a = got[: int(keep_a)]
        set_b = list(reversed(got))[: int(keep_b)]
        merged = intersect(set_a, set_b)
        assert {p.ur_sentence_id for p in merged} == (
            {p.ur_sentence_id for p in set_a} & {p.ur_sentence_id for p in set_b}
        )
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    ok(f"top_n and intersect match brute-force oracles on 200 instances in {elapsed:.1f}s")


# --------------------------------------------------------------------------
# Criterion 3: sentence encoding equals the straight-line reference
# --------------------------------------------------------------------------

def test_sentence_encoding_matches_reference():
    rng = np.random.default_rng(7)
    words = [f"w{i}" for i in range(60)]
    vocab = {w: i for i, w in enumerate(words)}
    model = WordEmbeddingModel("toy", 12, vocab, rng.normal(size=(60, 12)), {})
    weight_choices = [
        PosWeights(),
        PosWeights(0.5, 0.25, 0.25),
        PosWeights(0.0, 0.5, 0.5),  # a zero weight exercises renormalization
    ]
    checked_empty_bucket = 0
    for case in range(100):
        weights = weight_choices[case % len(weight_choices)]
        pos_pool = ["VERB", "NOUN", "ADJ", "OTHER"]
        if case % 4 == 0:
            pos_pool = ["NOUN", "OTHER"]  # guarantees empty VERB/ADJ buckets
        tokens = [
            make_token(str(rng.choice(words + ["oov"])), str(rng.choice(pos_pool)))
            for _ in range(int(rng.integers(0, 12)))
        ]
        if not any(t.pos == "VERB" for t in tokens):
            checked_empty_bucket += 1
        expected = encode_reference(model, tokens, weights.w_verb, weights.w_noun,
                                    weights.w_adj)
        got = encode_sentence(model, tokens, weights)
        if expected is None:
            assert got is None
        else:
            np.testing.assert_allclose(got, expected, atol=1e-12, rtol=0)
    assert checked_empty_bucket >= 25
    ok("encode_sentence equals the straight-line reference (1e-12) on 100 sentences, "
       f"{checked_empty_bucket} with empty buckets")


# --------------------------------------------------------------------------
# Criterion 4: EMNB oracle agreement, monotone trace, separable accuracy
# --------------------------------------------------------------------------

def test_emnb_nb_oracle_agreement():
    vocab6 = ["bug", "crash", "fix", "love", "great", "nice"]
    labeled = [
        LabeledDoc(("bug", "crash", "fix"), INFORMATIVE),
        LabeledDoc(("crash", "bug"), INFORMATIVE),
        LabeledDoc(("love", "great"), NON_INFORMATIVE),
        LabeledDoc(("nice", "great", "love"), NON_INFORMATIVE),
    ]
    model = train_emnb(labeled, [], EmnbConfig())
    oracle = nb_oracle([(d.tokens, d.label) for d in labeled])
    checked = 0
    for length in range(0, 4):
        for tokens in itertools.product(vocab6, repeat=length):
            expected = oracle(list(tokens))
            got = classify(model, list(tokens))
            assert expected[got["label"]] == max(expected.values())
            assert got["posterior"] == pytest.approx(expected[got["label"]], abs=1e-12)
            checked += 1
    ok(f"EMNB with no unlabeled docs equals the smoothed-NB oracle on {checked} "
       "enumerated docs over a 6-word vocabulary")


def test_emnb_trace_monotone_on_random_corpora():
    rng = np.random.default_rng(99)
    vocab = [f"t{i}" for i in range(8)]
    for corpus_i in range(20):
        labeled = []
        for cls in (INFORMATIVE, NON_INFORMATIVE):
            for _ in range(int(rng.integers(1, 5))):
                length = int(rng.integers(1, 6))
                labeled.append(LabeledDoc(
                    tuple(rng.choice(vocab, size=length)), cls))
        unlabeled = [
            list(rng.choice(vocab, size=int(rng.integers(1, 6))))
            for _ in range(int(rng.integers(5, 40)))
        ]
        model = train_emnb(labeled, unlabeled,
                           EmnbConfig(max_iter=25, tol=0.0,
                                      smoothing_alpha=float(rng.choice([0.5, 1.0, 2.0]))))
        trace = model.log_likelihood_trace
        assert len(trace) == 26
        violations = [b - a for a, b in zip(trace, trace[1:]) if b - a < -1e-6]
        assert not violations, (corpus_i, violations)
    ok("EMNB objective trace non-decreasing (1e-6) on 20 random semi-supervised corpora")


def test_emnb_separable_heldout_accuracy():
    rng = np.random.default_rng(5)
    informative_vocab = [f"prob{i}" for i in range(12)]
    chatter_vocab = [f"nice{i}" for i in range(12)]
    shared = ["app", "really"]

    def make_doc(vocab):
        length = int(rng.integers(3, 8))
        words = list(rng.choice(vocab + shared, size=length))
        return words

    labeled = (
        [LabeledDoc(tuple(make_doc(informative_vocab)), INFORMATIVE) for _ in range(50)]
        + [LabeledDoc(tuple(make_doc(chatter_vocab)), NON_INFORMATIVE) for _ in range(50)]
    )
    unlabeled = [make_doc(informative_vocab) for _ in range(250)]
    unlabeled += [make_doc(chatter_vocab) for _ in range(250)]
    model = train_emnb(labeled, unlabeled, EmnbConfig())

    correct = 0
    held_out = 200
    for i in range(held_out):
        truth = INFORMATIVE if i % 2 == 0 else NON_INFORMATIVE
        doc = make_doc(informative_vocab if truth == INFORMATIVE else chatter_vocab)
        correct += classify(model, doc)["label"] == truth
    accuracy = correct / held_out
    assert accuracy >= 0.95
    ok(f"EMNB held-out accuracy {accuracy:.3f} >= 0.95 on the separable corpus "
       "(2x50 labeled, 500 unlabeled)")


# --------------------------------------------------------------------------
# Criterion 5: skip-gram planted co-occurrence + deterministic files
# --------------------------------------------------------------------------

def planted_corpus(rng):
    fillers = ["app", "screen", "update", "setting", "button", "icon"]
    sentences = []
    for _ in range(200):
        sentences.append(["dark", "mode", str(rng.choice(fillers))])
        sentences.append(["night", "mode", str(rng.choice(fillers))])
        sentences.append(["playlist", "song", str(rng.choice(fillers))])
    return sentences


def test_skipgram_planted_cooccurrence_and_determinism(tmp_path):
    wins = 0
    for seed in range(5):
        corpus = planted_corpus(np.random.default_rng(seed + 100))
        model = train_skipgram(
            corpus, SkipgramConfig(dim=32, window=3, epochs=3, min_count=2, seed=seed)
        )
        close = cosine(model.vector("dark"), model.vector("night"))
        far = cosine(model.vector("dark"), model.vector("playlist"))
        wins += close > far
    assert wins >= 4, f"only {wins}/5 seeds ranked night over playlist"

    corpus = planted_corpus(np.random.default_rng(0))
    config = SkipgramConfig(dim=32, window=3, epochs=2, min_count=2, seed=42)
    paths = []
    for run in range(2):
        model = train_skipgram(corpus, config)
        path = tmp_path / f"model_run{run}.vecw"
        model.save(path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    ok(f"skip-gram ranks planted co-occurrence in {wins}/5 seeds; deterministic mode "
       "writes byte-identical model files")


# --------------------------------------------------------------------------
# Criterion 6: end-to-end synthetic recall of planted relevant pairs
# --------------------------------------------------------------------------

POS_CYCLE = ["NOUN", "VERB", "ADJ"]


def bow_matrix(token_lists, dim, rng_salt=131):
    out = np.zeros((len(token_lists), dim))
    for i, lemmas in enumerate(token_lists):
        for lemma in lemmas:
            out[i, hash((rng_salt, lemma)) % dim] += 1.0
    return out


def test_end_to_end_synthetic_recall(tmp_path):
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    n_topics = 20
    planted_per_topic = 10
    n_reviews = 5000

    topic_lemmas = {
        t: [f"topic{t}word{j}" for j in range(6)] for t in range(n_topics)
    }
    background = [f"noise{j}" for j in range(240)]
    pos_of = {}
    for t, lemmas in topic_lemmas.items():
        for j, lemma in enumerate(lemmas):
            pos_of[lemma] = POS_CYCLE[j % 3]
    for j, lemma in enumerate(background):
        pos_of[lemma] = POS_CYCLE[j % 3]

    # 20 note sentences, one per topic
    note_ids = []
    note_tokens = {}
    for t in range(n_topics):
        sid = f"note{t}:0"
        note_ids.append(sid)
        note_tokens[sid] = topic_lemmas[t]

    # 200 planted + 4800 background review sentences
    review_tokens = {}
    planted_pairs = set()
    sid_counter = 0
    for t in range(n_topics):
        for _ in range(planted_per_topic):
            sid = f"rev{sid_counter}:0"
            sid_counter += 1
            words = list(rng.choice(topic_lemmas[t], size=4, replace=False))
            words += list(rng.choice(background, size=2, replace=False))
            review_tokens[sid] = words
            planted_pairs.add((f"note{t}:0", sid))
    while sid_counter < n_reviews:
        sid = f"rev{sid_counter}:0"
        sid_counter += 1
        review_tokens[sid] = list(rng.choice(background, size=6, replace=False))

    # backend 1: skip-gram trained on the review corpus
    corpus = [review_tokens[sid] for sid in sorted(review_tokens)]
    model = train_skipgram(
        corpus, SkipgramConfig(dim=48, window=5, epochs=3, min_count=2, seed=11)
    )
    weights = PosWeights()

    def tokens_of(lemmas):
        return [Token(surface=l, lemma=l, pos=pos_of[l]) for l in lemmas]

    sg_reviews = SentenceVectorStore("skipgram", model.dim)
    for sid in sorted(review_tokens):
        vec = encode_sentence(model, tokens_of(review_tokens[sid]), weights)
        if vec is not None:
            sg_reviews.add(sid, vec)
    sg_notes = SentenceVectorStore("skipgram", model.dim)
    for sid in note_ids:
        vec = encode_sentence(model, tokens_of(note_tokens[sid]), weights)
        assert vec is not None, f"note {sid} must be encodable"
        sg_notes.add(sid, vec)

    # backend 2: imported bag-of-words VEC1 file
    dim_bow = 160
    all_ids = sorted(review_tokens) + note_ids
    matrix = bow_matrix([review_tokens.get(sid) or note_tokens[sid] for sid in all_ids],
                        dim_bow)
    vec_path = tmp_path / "external.vec"
    with open(vec_path, "w", encoding="utf-8") as fh:
        fh.write(f"VEC1 {dim_bow} {len(all_ids)}\n")
        for sid, row in zip(all_ids, matrix):
            fh.write(sid + "\t" + " ".join(repr(float(v)) for v in row) + "\n")
    external = import_external_vectors(vec_path, set(all_ids))
    ext_reviews = external.subset(sorted(review_tokens))
    ext_notes = external.subset(note_ids)

    backends = {
        "skipgram": {"notes": sg_notes, "reviews": sg_reviews},
        "external": {"notes": ext_notes, "reviews": ext_reviews},
    }
    reports = run_match(note_ids, backends, n=80)

    found = set()
    for report in reports:
        for pair in report.intersection:
            found.add((pair.rn_sentence_id, pair.ur_sentence_id))
    recall = len(found & planted_pairs) / len(planted_pairs)
    elapsed = time.perf_counter() - start
    assert recall >= 0.6, f"intersection recall {recall:.3f} < 0.6"
    assert elapsed < 120.0, f"end-to-end took {elapsed:.1f}s"
    ok(f"end-to-end synthetic: intersection recall {recall:.3f} >= 0.6 of 200 planted "
       f"pairs at N=80 under two backends, in {elapsed:.1f}s")


# --------------------------------------------------------------------------
# Criterion 7: temporal fixtures
# --------------------------------------------------------------------------

def test_temporal_fixtures():
    assert time_interval(date(2019, 3, 10), date(2019, 3, 1)) == 9
    assert time_interval(date(2018, 1, 1), date(2019, 1, 1)) == -365
    assert time_interval(date(2020, 7, 4), date(2020, 7, 4)) == 0
    assert interval_averages([-10, -20, 30]) == (15.0, 30.0)
    assert interval_averages([3, 4]) == (0.0, 3.5)

    rng = np.random.default_rng(17)
    for _ in range(1000):
        deltas = list(rng.integers(-2000, 2001, size=int(rng.integers(0, 80))))
        hist = interval_histogram(deltas, 20)
        assert sum(c for _, c in hist) == len(deltas)

    boundary = dict(interval_histogram([1398], 20))
    assert boundary == {1380: 1}
    ok("temporal fixtures: interval formula, strict-side averages, count-conserving "
       "histogram (1000 random sets), 1398-day boundary lands in [1380, 1400)")


# --------------------------------------------------------------------------
# Criterion 8: brute-force matching performance
# --------------------------------------------------------------------------

def test_matching_performance_100k_by_50():
    rng = np.random.default_rng(1234)
    n_reviews, dim, n_notes = 100_000, 300, 50
    review_matrix = rng.standard_normal((n_reviews, dim))
    ids = [f"r{i:06d}" for i in range(n_reviews)]
    store = SentenceVectorStore.from_matrix("b", ids, review_matrix)
    note_vectors = rng.standard_normal((n_notes, dim))

    from notematch.embedding import SentenceVector

    start = time.perf_counter()
    total = 0
    for k in range(n_notes):
        pairs = top_n(SentenceVector(f"n{k}:0", "b", note_vectors[k]), store, 80)
        total += len(pairs)
    elapsed = time.perf_counter() - start
    assert total == n_notes * 80
    assert elapsed < 60.0, f"matching took {elapsed:.1f}s"
    ok(f"exact brute-force matching of 100,000 x 300 vectors against 50 notes at N=80 "
       f"in {elapsed:.1f}s (< 60s)")
