"""Command-line surface and end-to-end pipeline orchestration.

Subcommands: ingest, preprocess, filter-train, filter-apply, embed-train,
embed-import, match, report (hit-ratio | roles | temporal | eligibility),
serve, export. A JSON config file supplies defaults; flags win. Exit codes:
0 success, 1 user error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, corpus, embedding, informative, matcher, postag, preprocess, report
from .analysis import LabelError
from .corpus import CorpusError, CorpusStore
from .embedding import (
    EXTERNAL_BACKEND,
    SKIPGRAM_BACKEND,
    EmbeddingError,
    PosWeights,
    SentenceVectorStore,
    SkipgramConfig,
    WordEmbeddingModel,
)
from .informative import EmnbConfig, EmnbModel, TrainingError
from .matcher import MatchError
from .postag import LexiconError, PosLexicon
from .preprocess import PreprocessError, SentenceStore
from .server import ServerError, create_server

WORD_MODEL_FILE = "skipgram_words.vecw"
EMNB_MODEL_FILE = "emnb_model.json"
MATCH_SUMMARY_FILE = "match_summary.json"
DEFAULT_PORT = 8747
DEFAULT_TOP_N = 80

USER_ERRORS = (
    CorpusError, PreprocessError, TrainingError, EmbeddingError,
    MatchError, LabelError, ServerError, LexiconError,
)


class UserError(Exception):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def vectors_file(data_dir: Path, backend_id: str) -> Path:
    return data_dir / f"vectors_{backend_id}.vec"


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UserError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UserError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UserError(f"config {path} must be a JSON object")
    return cfg


def pick(flag_value, cfg: dict, key: str, default):
    """Flag wins over config file wins over default."""
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return default


def data_dir_from(args, cfg: dict) -> Path:
    return Path(pick(args.data_dir, cfg, "data_dir", "data"))


def pos_weights_from(cfg: dict) -> PosWeights:
    pw = cfg.get("pos_weights")
    if not pw:
        return PosWeights()
    return PosWeights(w_verb=pw["w_verb"], w_noun=pw["w_noun"], w_adj=pw["w_adj"])


def skipgram_config_from(args, cfg: dict) -> SkipgramConfig:
    sg = cfg.get("skipgram", {})
    base = SkipgramConfig()
    return SkipgramConfig(
        dim=int(pick(getattr(args, "dim", None), sg, "dim", base.dim)),
        window=int(pick(getattr(args, "window", None), sg, "window", base.window)),
        negative=int(pick(getattr(args, "negative", None), sg, "negative", base.negative)),
        epochs=int(pick(getattr(args, "epochs", None), sg, "epochs", base.epochs)),
        min_count=int(pick(getattr(args, "min_count", None), sg, "min_count", base.min_count)),
        learning_rate=float(
            pick(getattr(args, "learning_rate", None), sg, "learning_rate", base.learning_rate)
        ),
        seed=int(pick(getattr(args, "seed", None), sg, "seed", base.seed)),
        workers=int(pick(getattr(args, "workers", None), sg, "workers", base.workers)),
    )


# ---------------------------------------------------------------------------
# Pipeline steps
# ---------------------------------------------------------------------------

def preprocess_app(store: CorpusStore, sentences: SentenceStore, lexicon: PosLexicon,
                   app_id: str, strip_digits: bool = True) -> dict:
    """Split, normalize, tag, and de-duplicate one app's sentences."""
    review_sentences = []
    for review in sorted(store.reviews_for_app(app_id), key=lambda r: r.review_id):
        for sentence in preprocess.split_review_sentences(review):
            sentence.tokens = postag.tag(
                preprocess.normalize_tokens(sentence.text, strip_digits=strip_digits), lexicon
            )
            review_sentences.append(sentence)

    note_sentences = []
    for note in store.notes_for_app(app_id):
        note_sentences.extend(preprocess.split_note_sentences(note))
    for sentence in note_sentences:
        sentence.tokens = postag.tag(
            preprocess.normalize_tokens(sentence.text, strip_digits=strip_digits), lexicon
        )
    note_sentences.sort(key=lambda s: (s.released_at, s.note_id, _position(s.sentence_id)))
    note_sentences = preprocess.dedup_note_sentences(note_sentences)

    sentences.replace_app_sentences(app_id, review_sentences, note_sentences)
    return {
        "app_id": app_id,
        "review_sentences": len(review_sentences),
        "note_sentences": len(note_sentences),
        "note_sentences_kept": sum(1 for s in note_sentences if s.kept),
    }


def _position(sentence_id: str) -> int:
    try:
        return int(sentence_id.rsplit(":", 1)[1])
    except (IndexError, ValueError):
        return 0


def _encode_all(model: WordEmbeddingModel, sentences: SentenceStore,
                weights: PosWeights) -> SentenceVectorStore:
    store = SentenceVectorStore(SKIPGRAM_BACKEND, model.dim)
    pool = list(sentences.review_sentences.values()) + list(sentences.note_sentences.values())
    for sentence in sorted(pool, key=lambda s: s.sentence_id):
        values = embedding.encode_sentence(model, sentence.tokens, weights)
        if values is not None:
            store.add(sentence.sentence_id, values)
    return store


def _load_backend_stores(data_dir: Path, backend_ids: Sequence[str],
                         sentences: SentenceStore, app_id: str) -> dict:
    """Per-backend {"notes": store, "reviews": store} restricted to one app."""
    kept_notes = {s.sentence_id for s in sentences.kept_note_sentences(app_id)}
    informative_reviews = {
        s.sentence_id for s in sentences.informative_review_sentences(app_id)
    }
    if not informative_reviews:
        raise UserError(
            f"no informative review sentences for app {app_id!r}; "
            "run `notematch filter-apply` first"
        )
    backends = {}
    for backend_id in backend_ids:
        path = vectors_file(data_dir, backend_id)
        if not path.exists():
            raise UserError(
                f"model missing: no sentence vectors for backend {backend_id!r} "
                f"({path.name} not found; run embed-train or embed-import first)"
            )
        full = SentenceVectorStore.load(path, backend_id)
        reviews = full.subset(sorted(informative_reviews))
        if len(reviews) == 0:
            raise UserError(
                f"backend {backend_id!r} has no vectors for informative review "
                f"sentences of app {app_id!r}"
            )
        backends[backend_id] = {"notes": full.subset(sorted(kept_notes)), "reviews": reviews}
    return backends


def _resolve_apps(args, store: CorpusStore) -> list[str]:
    if args.app in (None, "all"):
        apps = store.app_ids()
        if not apps:
            raise UserError("corpus is empty; run `notematch ingest` first")
        return apps
    if args.app not in store.app_ids():
        raise UserError(f"unknown app_id {args.app!r}")
    return [args.app]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    store = CorpusStore(data_dir)
    if not (args.apps or args.reviews or args.notes):
        raise UserError("nothing to ingest: pass --apps, --reviews, and/or --notes")
    if (args.reviews or args.notes) and not args.app_id:
        raise UserError("--app-id is required when ingesting reviews or notes")

    def show(kind: str, rep: corpus.IngestReport) -> None:
        print(f"{kind}: accepted {rep.accepted}, rejected {rep.rejected}")
        for rej in rep.rejections:
            print(f"  line {rej.line_no}: {rej.reason}", file=sys.stderr)

    if args.apps:
        show("apps", store.ingest_apps(args.apps))
    if args.reviews:
        show("reviews", store.ingest_reviews(args.reviews, args.app_id))
    if args.notes:
        show("notes", store.ingest_release_notes(args.notes, args.app_id))
    return 0


def cmd_preprocess(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    store = CorpusStore(data_dir)
    sentences = SentenceStore(data_dir)
    lexicon = PosLexicon.bundled()
    for app_id in _resolve_apps(args, store):
        stats = preprocess_app(store, sentences, lexicon, app_id,
                               strip_digits=not args.keep_digits)
        print(
            f"{app_id}: {stats['review_sentences']} review sentences, "
            f"{stats['note_sentences']} note sentences "
            f"({stats['note_sentences_kept']} kept after de-duplication)"
        )
    return 0


def cmd_filter_train(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    emnb_cfg_file = cfg.get("emnb", {})
    config = EmnbConfig(
        max_iter=int(pick(args.max_iter, emnb_cfg_file, "max_iter", EmnbConfig.max_iter)),
        tol=float(pick(args.tol, emnb_cfg_file, "tol", EmnbConfig.tol)),
        smoothing_alpha=float(
            pick(args.alpha, emnb_cfg_file, "smoothing_alpha", EmnbConfig.smoothing_alpha)
        ),
    )
    if args.seed_labels:
        labeled = informative.load_seed_labels(args.seed_labels)
    else:
        with resources.as_file(
            resources.files("notematch.data").joinpath("seed_labels.jsonl")
        ) as bundled:
            labeled = informative.load_seed_labels(bundled)
        print("using the bundled synthetic starter seed set (pass --seed-labels for real data)")

    unlabeled = []
    if args.unlabeled_limit != 0:
        sentences = SentenceStore(data_dir)
        pool = sorted(sentences.review_sentences.values(), key=lambda s: s.sentence_id)
        for sentence in pool:
            lemmas = [t.lemma for t in sentence.tokens]
            if lemmas:
                unlabeled.append(lemmas)
            if args.unlabeled_limit > 0 and len(unlabeled) >= args.unlabeled_limit:
                break

    model = informative.train_emnb(labeled, unlabeled, config)
    model.save(data_dir / EMNB_MODEL_FILE)
    print(
        f"trained on {len(labeled)} labeled + {len(unlabeled)} unlabeled docs; "
        f"{model.em_iterations_run} EM iterations, vocabulary {len(model.vocabulary)}"
    )
    return 0


def cmd_filter_apply(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    model_path = data_dir / EMNB_MODEL_FILE
    if not model_path.exists():
        raise UserError(f"model missing: {model_path} (run `notematch filter-train` first)")
    model = EmnbModel.load(model_path)
    sentences = SentenceStore(data_dir)
    pool = list(sentences.review_sentences.values())
    informative_n = len(informative.filter_corpus(model, pool))
    sentences.save()
    print(f"{informative_n} of {len(pool)} review sentences marked informative")
    return 0


def cmd_embed_train(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    config = skipgram_config_from(args, cfg)
    sentences = SentenceStore(data_dir)
    weights = pos_weights_from(cfg)

    train_pool = sorted(
        (s for s in sentences.review_sentences.values() if s.informative),
        key=lambda s: s.sentence_id,
    )
    if not train_pool:
        raise UserError(
            "no informative review sentences to train on; run `notematch filter-apply` first"
        )
    token_lists = [[t.lemma for t in s.tokens] for s in train_pool]
    model = embedding.train_skipgram(token_lists, config)
    model.save(data_dir / WORD_MODEL_FILE)

    store = _encode_all(model, sentences, weights)
    store.save(vectors_file(data_dir, SKIPGRAM_BACKEND))
    print(
        f"skip-gram: vocabulary {len(model.vocab)}, dim {model.dim}; "
        f"encoded {len(store)} sentence vectors"
    )
    return 0


def cmd_embed_import(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    sentences = SentenceStore(data_dir)
    known = set(sentences.review_sentences) | set(sentences.note_sentences)
    store = embedding.import_external_vectors(args.path, known)
    store.save(vectors_file(data_dir, EXTERNAL_BACKEND))
    print(f"imported {len(store)} external sentence vectors (dim {store.dim})")
    return 0


def cmd_match(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    store = CorpusStore(data_dir)
    sentences = SentenceStore(data_dir)
    n = int(pick(args.n, cfg, "top_n", DEFAULT_TOP_N))
    backends_raw = pick(args.backends, cfg, "backends", f"{SKIPGRAM_BACKEND},{EXTERNAL_BACKEND}")
    if isinstance(backends_raw, str):
        backends_raw = backends_raw.split(",")
    backend_ids = sorted(b.strip() for b in backends_raw if b.strip())
    if not backend_ids:
        raise UserError("no backends requested")
    if args.app is None:
        raise UserError("--app is required")
    if args.app not in store.app_ids():
        raise UserError(f"unknown app_id {args.app!r}")

    kept = sorted(
        sentences.kept_note_sentences(args.app),
        key=lambda s: (s.released_at, s.note_id, _position(s.sentence_id)),
    )
    if args.notes:
        wanted = set(args.notes.split(","))
        kept = [s for s in kept if s.sentence_id in wanted or s.note_id in wanted]
    if not kept:
        raise UserError(f"no kept note sentences for app {args.app!r}; run preprocess first")

    backends = _load_backend_stores(data_dir, backend_ids, sentences, args.app)
    reports = matcher.run_match([s.sentence_id for s in kept], backends, n)
    records = matcher.pairs_records(reports)

    pairs_path = data_dir / "pairs.jsonl"
    existing = []
    note_ids = {s.sentence_id for s in sentences.note_sentences_for_app(args.app)}
    if pairs_path.exists():
        with open(pairs_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rec = json.loads(line)
                    if rec["rn_sentence_id"] not in note_ids:
                        existing.append(rec)
    merged = existing + records
    merged.sort(key=lambda r: (r["rn_sentence_id"], r["ur_sentence_id"]))
    with open(pairs_path, "w", encoding="utf-8") as fh:
        for rec in merged:
            fh.write(corpus.canonical_json(rec) + "\n")

    summary = matcher.match_summary(reports)
    summary_path = data_dir / MATCH_SUMMARY_FILE
    summary_path.write_text(
        json.dumps(summary, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
    print(
        f"{args.app}: matched {summary['notes_matched']} note sentences, "
        f"{summary['pooled_intersection']} pooled intersection pairs "
        f"-> {pairs_path}"
    )
    return 0


def cmd_report(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    out_dir = Path(args.out_dir) if args.out_dir else data_dir / "reports"

    if args.kind == "eligibility":
        return _report_eligibility(args, cfg, data_dir, out_dir)

    labels = analysis.load_labels(data_dir / "labels.jsonl")
    consensus, unresolved = analysis.consensus_labels(labels)
    pairs = _load_pairs_records(data_dir)

    if args.kind == "hit-ratio":
        if not consensus:
            raise UserError("no labels found; label pairs first (`notematch serve`)")
        if unresolved:
            print(f"note: {len(unresolved)} pairs lack consensus and are excluded",
                  file=sys.stderr)
        rows = _hit_ratio_rows(consensus, pairs, SentenceStore(data_dir), args.app)
        paths = report.write_hit_ratio_report(rows, out_dir)
        for row in rows:
            print(f"{row['app_id']}: {row['relevant']}/{row['total']} = {row['hit_ratio']:.3f}")
        print(f"wrote {paths['csv']} and {paths['figure']}")
        return 0

    if args.kind == "roles":
        if not consensus:
            raise UserError("no labels found; label pairs first (`notematch serve`)")
        distribution = analysis.role_distribution(consensus)
        paths = report.write_roles_report(distribution, out_dir)
        for row in distribution:
            print(f"{row['role']}: {row['count']} ({row['percent']:.1f}%)")
        print(f"wrote {paths['csv']} and {paths['figure']}")
        return 0

    if args.kind == "temporal":
        deltas = _temporal_deltas(data_dir, pairs, consensus, args)
        stats = analysis.IntervalStats.from_deltas(deltas, bin_width=args.bin_width)
        paths = report.write_temporal_report(stats, out_dir)
        print(
            f"pairs: {len(deltas)}; t_before_avg: {stats.t_before_avg:.2f} days; "
            f"t_after_avg: {stats.t_after_avg:.2f} days"
        )
        print(f"wrote {paths['histogram_csv']}, {paths['averages_csv']}, {paths['figure']}")
        return 0

    raise UserError(f"unknown report kind {args.kind!r}")


def _report_eligibility(args, cfg, data_dir: Path, out_dir: Path) -> int:
    store = CorpusStore(data_dir)
    sentences = SentenceStore(data_dir)
    as_of = date.fromisoformat(args.as_of) if args.as_of else None
    rows = []
    for app_id in _resolve_apps(args, store):
        rows.append(
            corpus.app_eligibility_report(
                store, sentences.note_sentences_for_app(app_id), app_id,
                as_of=as_of, min_notes=args.min_notes, min_reviews=args.min_reviews,
            )
        )
    paths = report.write_eligibility_report(rows, out_dir)
    for row in rows:
        rate = row["sentence_repetition_rate"]
        print(
            f"{row['app_id']}: age_days={row['age_days']} notes={row['note_count']} "
            f"reviews={row['review_count']} repetition="
            f"{'null' if rate is None else f'{rate:.3f}'} "
            f"IC1.1={row['passes_IC1_1']} IC1.2={row['passes_IC1_2']} "
            f"IC1.3={row['passes_IC1_3']}"
        )
    print(f"wrote {paths['csv']}")
    return 0


def _load_pairs_records(data_dir: Path) -> dict[str, dict]:
    path = data_dir / "pairs.jsonl"
    if not path.exists():
        return {}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rec = json.loads(line)
                out[rec["pair_id"]] = rec
    return out


def _hit_ratio_rows(consensus, pairs: dict[str, dict], sentences: SentenceStore,
                    app: Optional[str]) -> list[dict]:
    by_app: dict[str, list] = {}
    for label in consensus:
        rec = pairs.get(label.pair_id)
        app_id = "unknown"
        if rec is not None:
            rn = sentences.note_sentences.get(rec["rn_sentence_id"])
            if rn is not None:
                app_id = rn.app_id
        by_app.setdefault(app_id, []).append(label)

    rows = []
    overall = []
    for app_id in sorted(by_app):
        if app and app != "all" and app_id != app:
            continue
        labels = by_app[app_id]
        overall.extend(labels)
        relevant = sum(1 for l in labels if l.relevance == analysis.RELEVANT)
        rows.append({
            "app_id": app_id,
            "relevant": relevant,
            "total": len(labels),
            "hit_ratio": analysis.hit_ratio(labels),
        })
    if len(rows) > 1:
        relevant = sum(1 for l in overall if l.relevance == analysis.RELEVANT)
        rows.append({
            "app_id": "total",
            "relevant": relevant,
            "total": len(overall),
            "hit_ratio": analysis.hit_ratio(overall),
        })
    if not rows:
        raise UserError("no labeled pairs match the requested app")
    return rows


def _temporal_deltas(data_dir: Path, pairs: dict[str, dict], consensus, args) -> list[int]:
    sentences = SentenceStore(data_dir)
    which = args.which
    if which == "relevant" and not consensus:
        print("note: no labels found, falling back to intersection pairs", file=sys.stderr)
        which = "intersection"

    if which == "relevant":
        wanted = {l.pair_id for l in consensus if l.relevance == analysis.RELEVANT}
        records = [pairs[pid] for pid in sorted(wanted) if pid in pairs]
    elif which == "intersection":
        records = [pairs[pid] for pid in sorted(pairs) if pairs[pid].get("in_intersection")]
    else:
        records = [pairs[pid] for pid in sorted(pairs)]

    deltas = []
    for rec in records:
        rn = sentences.note_sentences.get(rec["rn_sentence_id"])
        ur = sentences.review_sentences.get(rec["ur_sentence_id"])
        if rn is None or ur is None:
            raise UserError(f"pair {rec['pair_id']} references unknown sentences")
        if args.app and args.app != "all" and rn.app_id != args.app:
            continue
        deltas.append(analysis.time_interval(rn.released_at, ur.posted_at))
    if not deltas:
        raise UserError("no matched pairs to analyze; run `notematch match` first")
    return deltas


def cmd_serve(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    port = int(pick(args.port, cfg, "server_port", DEFAULT_PORT))
    server = create_server(data_dir, port, token=args.token, ui_dir=args.ui_dir)
    bound_port = server.server_address[1]
    print(f"annotation API listening on http://127.0.0.1:{bound_port} (Ctrl-C to stop)",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("shutting down")
    finally:
        server.server_close()
    return 0


def cmd_export(args, cfg: dict) -> int:
    data_dir = data_dir_from(args, cfg)
    out = Path(args.out)
    if args.what in ("apps", "reviews", "notes"):
        store = CorpusStore(data_dir)
        count = store.export(args.what, out)
    elif args.what in ("labels", "pairs"):
        src = data_dir / f"{args.what}.jsonl"
        if not src.exists():
            raise UserError(f"nothing to export: {src} does not exist")
        out.write_bytes(src.read_bytes())
        count = sum(1 for line in src.read_text(encoding="utf-8").splitlines() if line.strip())
    else:
        raise UserError(f"unknown export target {args.what!r}")
    print(f"exported {count} {args.what} records to {out}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> CliParser:
    parser = CliParser(prog="notematch",
                       description="Match app release-note sentences with review sentences")
    parser.add_argument("--config", help="JSON config file (flags win over it)")
    parser.add_argument("--data-dir", help="data directory (default: data)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("ingest", help="ingest apps/reviews/notes JSONL files")
    p.add_argument("--app-id", help="app the reviews/notes belong to")
    p.add_argument("--apps", help="apps JSONL file")
    p.add_argument("--reviews", help="reviews JSONL file")
    p.add_argument("--notes", help="release-notes JSONL file")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("preprocess", help="split, normalize, tag, and de-duplicate")
    p.add_argument("--app", help="app id or 'all' (default all)")
    p.add_argument("--keep-digits", action="store_true",
                   help="keep digit-only tokens during normalization")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("filter-train", help="train the informative-sentence classifier")
    p.add_argument("--seed-labels", help="seed labels JSONL (default: bundled starter set)")
    p.add_argument("--unlabeled-limit", type=int, default=20000,
                   help="max unlabeled sentences for EM (0 disables EM)")
    p.add_argument("--max-iter", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--alpha", type=float)
    p.set_defaults(func=cmd_filter_train)

    p = sub.add_parser("filter-apply", help="flag informative review sentences")
    p.set_defaults(func=cmd_filter_apply)

    p = sub.add_parser("embed-train", help="train skip-gram and encode sentences")
    p.add_argument("--dim", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--negative", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--min-count", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_embed_train)

    p = sub.add_parser("embed-import", help="import external sentence vectors (VEC1)")
    p.add_argument("--path", required=True, help="VEC1 sentence-vector file")
    p.set_defaults(func=cmd_embed_import)

    p = sub.add_parser("match", help="rank candidates and take the backend intersection")
    p.add_argument("--app", help="app id")
    p.add_argument("--n", type=int, help=f"top-N per backend (default {DEFAULT_TOP_N})")
    p.add_argument("--backends", help="comma-separated backend ids")
    p.add_argument("--notes", help="restrict to these note ids or note sentence ids")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("report", help="write CSV + figure reports")
    p.add_argument("kind", choices=["hit-ratio", "roles", "temporal", "eligibility"])
    p.add_argument("--app", help="app id or 'all'")
    p.add_argument("--out-dir", help="report output directory (default DATA_DIR/reports)")
    p.add_argument("--bin-width", type=int, default=20)
    p.add_argument("--which", choices=["relevant", "intersection", "all"], default="relevant",
                   help="which pairs feed the temporal report")
    p.add_argument("--min-notes", type=int, default=corpus.DEFAULT_MIN_NOTES)
    p.add_argument("--min-reviews", type=int, default=corpus.DEFAULT_MIN_REVIEWS)
    p.add_argument("--as-of", help="eligibility reference date YYYY-MM-DD (default today)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the annotation HTTP JSON API")
    p.add_argument("--port", type=int)
    p.add_argument("--token", help="require X-Auth-Token on every request")
    p.add_argument("--ui-dir", help="also serve a built UI from this directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="export stored records")
    p.add_argument("--what", required=True,
                   choices=["apps", "reviews", "notes", "labels", "pairs"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (UserError, *USER_ERRORS) as exc:
        print(f"notematch: error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # internal error
        import traceback

        traceback.print_exc()
        print(f"notematch: internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
