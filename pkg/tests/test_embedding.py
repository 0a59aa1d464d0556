import numpy as np
import pytest

from notematch.embedding import (
    EmbeddingError,
    PosWeights,
    SentenceVectorStore,
    SkipgramConfig,
    VectorFormatError,
    WordEmbeddingModel,
    encode_sentence,
    import_external_vectors,
    train_skipgram,
)
from notematch.matcher import cosine

from conftest import make_token
from helpers import encode_reference


def toy_model(words, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    vocab = {w: i for i, w in enumerate(words)}
    vectors = rng.normal(size=(len(words), dim))
    return WordEmbeddingModel("toy", dim, vocab, vectors, {})


class TestPosWeights:
    def test_default_thirds(self):
        w = PosWeights()
        assert w.w_verb == pytest.approx(1 / 3)
        assert w.w_verb + w.w_noun + w.w_adj == pytest.approx(1.0, abs=1e-9)

    def test_must_sum_to_one(self):
        with pytest.raises(EmbeddingError):
            PosWeights(0.5, 0.5, 0.5)

    def test_no_negatives(self):
        with pytest.raises(EmbeddingError):
            PosWeights(-0.2, 0.6, 0.6)


class TestEncodeSentence:
    def test_single_member_buckets_reduce_to_plain_average(self):
        model = toy_model(["need", "dark", "mode"])
        tokens = [make_token("need", "VERB"), make_token("dark", "ADJ"),
                  make_token("mode", "NOUN")]
        out = encode_sentence(model, tokens, PosWeights())
        expected = (model.vector("need") + model.vector("dark") + model.vector("mode")) / 3
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_missing_bucket_renormalizes(self):
        model = toy_model(["fix", "bug"])
        tokens = [make_token("fix", "VERB"), make_token("bug", "NOUN")]
        out = encode_sentence(model, tokens, PosWeights())
        expected = 0.5 * model.vector("fix") + 0.5 * model.vector("bug")
        np.testing.assert_allclose(out, expected, atol=1e-12)

    def test_all_other_tokens_unencodable(self):
        model = toy_model(["fix"])
        assert encode_sentence(model, [make_token("fix", "OTHER")], PosWeights()) is None

    def test_fully_oov_bucket_drops(self):
        model = toy_model(["mode"])
        tokens = [make_token("unknownverb", "VERB"), make_token("mode", "NOUN")]
        out = encode_sentence(model, tokens, PosWeights())
        np.testing.assert_allclose(out, model.vector("mode"), atol=1e-12)

    def test_empty_tokens_unencodable(self):
        assert encode_sentence(toy_model(["x"]), [], PosWeights()) is None

    def test_order_invariance_within_buckets(self):
        model = toy_model(["a", "b", "c", "d"])
        tokens = [make_token("a", "NOUN"), make_token("b", "NOUN"),
                  make_token("c", "VERB"), make_token("d", "ADJ")]
        shuffled = [tokens[2], tokens[1], tokens[3], tokens[0]]
        np.testing.assert_allclose(
            encode_sentence(model, tokens, PosWeights()),
            encode_sentence(model, shuffled, PosWeights()),
            atol=1e-12,
        )

    def test_matches_straightline_reference(self):
        rng = np.random.default_rng(7)
        words = [f"w{i}" for i in range(30)]
        model = toy_model(words, dim=8, seed=3)
        for _ in range(50):
            tokens = [
                make_token(rng.choice(words + ["oov1", "oov2"]),
                           rng.choice(["VERB", "NOUN", "ADJ", "OTHER"]))
                for _ in range(rng.integers(0, 10))
            ]
            expected = encode_reference(model, tokens, 1 / 3, 1 / 3, 1 / 3)
            got = encode_sentence(model, tokens, PosWeights())
            if expected is None:
                assert got is None
            else:
                np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_word_vector_scaling_leaves_cosine_unchanged(self):
        model = toy_model(["a", "b", "c", "d"], dim=6)
        scaled = WordEmbeddingModel("toy2", model.dim, model.vocab,
                                    model.vectors * 3.7, {})
        s1 = [make_token("a", "NOUN"), make_token("c", "VERB")]
        s2 = [make_token("b", "NOUN"), make_token("d", "ADJ")]
        base = cosine(encode_sentence(model, s1, PosWeights()),
                      encode_sentence(model, s2, PosWeights()))
        after = cosine(encode_sentence(scaled, s1, PosWeights()),
                       encode_sentence(scaled, s2, PosWeights()))
        assert after == pytest.approx(base, abs=1e-12)


class TestTrainSkipgram:
    def test_min_count_excludes_rare_lemmas(self):
        sentences = [["common", "common2"]] * 6 + [["rare", "common"]] * 3
        model = train_skipgram(sentences, SkipgramConfig(dim=8, min_count=5, epochs=1))
        assert "common" in model
        assert "rare" not in model

    def test_default_dim_is_300(self):
        assert SkipgramConfig().dim == 300

    def test_empty_corpus_is_error(self):
        with pytest.raises(EmbeddingError):
            train_skipgram([], SkipgramConfig())

    def test_empty_vocabulary_is_error(self):
        with pytest.raises(EmbeddingError):
            train_skipgram([["once"]], SkipgramConfig(min_count=5))

    def test_deterministic_mode_bit_reproducible(self, tmp_path):
        sentences = [["dark", "mode", "night"], ["play", "playlist", "song"]] * 10
        config = SkipgramConfig(dim=12, min_count=1, epochs=2, seed=42)
        one = train_skipgram(sentences, config)
        two = train_skipgram(sentences, config)
        np.testing.assert_array_equal(one.vectors, two.vectors)
        p1, p2 = tmp_path / "m1.vecw", tmp_path / "m2.vecw"
        one.save(p1)
        two.save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_planted_cooccurrence_smoke(self):
        rng = np.random.default_rng(1)
        sentences = []
        for _ in range(200):
            sentences.append(["dark", "mode", rng.choice(["app", "screen"])])
            sentences.append(["night", "mode", rng.choice(["app", "screen"])])
            sentences.append(["playlist", "song", rng.choice(["shuffle", "artist"])])
        model = train_skipgram(sentences, SkipgramConfig(dim=24, min_count=2, epochs=3, seed=5))
        sim_dark_night = cosine(model.vector("dark"), model.vector("night"))
        sim_dark_playlist = cosine(model.vector("dark"), model.vector("playlist"))
        assert sim_dark_night > sim_dark_playlist

    def test_model_vectors_finite(self):
        sentences = [["a", "b", "c"], ["a", "c", "d"]] * 5
        model = train_skipgram(sentences, SkipgramConfig(dim=8, min_count=1, epochs=2))
        assert np.all(np.isfinite(model.vectors))


class TestWordModelFile:
    def test_round_trip(self, tmp_path):
        sentences = [["alpha", "beta", "gamma"]] * 5
        model = train_skipgram(sentences, SkipgramConfig(dim=6, min_count=1, epochs=1))
        path = tmp_path / "words.vecw"
        model.save(path)
        loaded = WordEmbeddingModel.load(path)
        assert loaded.vocab == model.vocab
        np.testing.assert_array_equal(loaded.vectors, model.vectors)


class TestVec1Format:
    def _write(self, path, lines):
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    def test_round_trip(self, tmp_path):
        store = SentenceVectorStore("external", 3)
        store.add("s1", np.array([1.0, 2.0, 3.0]))
        store.add("s2", np.array([-0.5, 0.25, 1e-7]))
        path = tmp_path / "v.vec"
        store.save(path)
        loaded = SentenceVectorStore.load(path, "external")
        assert loaded.ids() == ["s1", "s2"]
        np.testing.assert_array_equal(loaded.get("s2"), store.get("s2"))

    def test_happy_header(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 384 2",
                           "s1\t" + " ".join(["0.5"] * 384),
                           "s2\t" + " ".join(["0.25"] * 384)])
        store = import_external_vectors(path, {"s1", "s2"})
        assert len(store) == 2
        assert store.dim == 384

    def test_short_row_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 384 1", "s1\t" + " ".join(["0.5"] * 383)])
        with pytest.raises(VectorFormatError, match="383"):
            SentenceVectorStore.load(path, "external")

    def test_duplicate_id_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 2 2", "s1\t1.0 0.0", "s1\t0.0 1.0"])
        with pytest.raises(VectorFormatError, match="duplicate"):
            SentenceVectorStore.load(path, "external")

    def test_unknown_sentence_id_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 2 1", "ghost\t1.0 0.0"])
        with pytest.raises(VectorFormatError, match="unknown"):
            import_external_vectors(path, {"s1"})

    def test_malformed_float_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 2 1", "s1\t1.0 banana"])
        with pytest.raises(VectorFormatError, match="malformed float"):
            SentenceVectorStore.load(path, "external")

    def test_count_mismatch_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        self._write(path, ["VEC1 2 5", "s1\t1.0 0.0"])
        with pytest.raises(VectorFormatError, match="5 rows"):
            SentenceVectorStore.load(path, "external")

    def test_missing_trailing_newline_is_error(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("VEC1 2 1\ns1\t1.0 0.0", encoding="utf-8")
        with pytest.raises(VectorFormatError, match="newline"):
            SentenceVectorStore.load(path, "external")

    def test_zero_vector_rejected(self, tmp_path):
        store = SentenceVectorStore("external", 2)
        with pytest.raises(VectorFormatError, match="zero"):
            store.add("s1", np.zeros(2))

    def test_nan_rejected(self):
        store = SentenceVectorStore("external", 2)
        with pytest.raises(VectorFormatError, match="non-finite"):
            store.add("s1", np.array([np.nan, 1.0]))
