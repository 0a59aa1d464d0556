"""HTTP JSON API for the annotation workflow.

Serves matched pairs with their full sentence context, accepts labels, and
reports progress and inter-annotator agreement. The server never mutates
the corpus or pairs files; labels are append-only, fsynced before a POST
is acknowledged, and a torn trailing line is ignored on reload.

Endpoints (all JSON, UTF-8):
    GET  /api/pairs?annotator=&state=&app=&in_intersection=&limit=
    GET  /api/pairs/{pair_id}
    POST /api/labels            body: label JSON minus labeled_at
    GET  /api/progress
    GET  /api/agreement?a=&b=
    GET  /api/export            labels JSONL stream
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from . import analysis
from .analysis import ADJUDICATOR, PairLabel, Role
from .corpus import CorpusStore
from .preprocess import SentenceStore

PAIRS_FILE = "pairs.jsonl"
LABELS_FILE = "labels.jsonl"


class ServerError(Exception):
    pass


def load_pairs(path: str | Path) -> dict[str, dict]:
    path = Path(path)
    if not path.exists():
        raise ServerError(f"pairs file missing: {path} (run `notematch match` first)")
    pairs = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ServerError(f"{path}:{line_no}: corrupt pairs file: {exc}") from exc
            pairs[rec["pair_id"]] = rec
    return pairs


class AnnotationService:
    """Pairs plus labels with a single serialized label writer."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.corpus = CorpusStore(self.data_dir)
        self.sentences = SentenceStore(self.data_dir)
        self.pairs = load_pairs(self.data_dir / PAIRS_FILE)
        self.labels_path = self.data_dir / LABELS_FILE
        self._lock = threading.Lock()
        self._labels = analysis.load_labels(self.labels_path)
        self._labeled_by: set[tuple[str, str]] = {
            (l.pair_id, l.annotator) for l in self._labels
        }

    # -- pair views ----------------------------------------------------------

    def pair_view(self, rec: dict) -> dict:
        rn = self.sentences.note_sentences.get(rec["rn_sentence_id"])
        ur = self.sentences.review_sentences.get(rec["ur_sentence_id"])
        view = {
            "pair_id": rec["pair_id"],
            "rn_sentence_id": rec["rn_sentence_id"],
            "ur_sentence_id": rec["ur_sentence_id"],
            "sims": rec.get("sims", {}),
            "ranks": rec.get("ranks", {}),
            "in_intersection": rec.get("in_intersection", False),
        }
        delta = None
        if rn is not None:
            note = self.corpus.notes.get(rn.note_id)
            view["app_id"] = rn.app_id
            view["note"] = {
                "note_id": rn.note_id,
                "text": rn.text,
                "released_at": rn.released_at.isoformat(),
                "version": note.version if note else None,
            }
        if ur is not None:
            review = self.corpus.reviews.get(ur.review_id)
            view["review"] = {
                "review_id": ur.review_id,
                "text": ur.text,
                "posted_at": ur.posted_at.isoformat(),
                "rating": review.rating if review else None,
                "full_text": self._full_review_text(review) if review else None,
            }
        if rn is not None and ur is not None:
            delta = analysis.time_interval(rn.released_at, ur.posted_at)
        view["delta_days"] = delta
        return view

    @staticmethod
    def _full_review_text(review) -> str:
        if review.title:
            return f"{review.title}\n{review.body}"
        return review.body

    def list_pairs(self, annotator: Optional[str], state: str, app: Optional[str],
                   in_intersection: Optional[bool], limit: int) -> dict:
        views = []
        matching = 0
        for pid in sorted(self.pairs):
            rec = self.pairs[pid]
            if in_intersection is not None and rec.get("in_intersection") != in_intersection:
                continue
            if state != "all":
                labeled = self._is_labeled(pid, annotator)
                if state == "unlabeled" and labeled:
                    continue
                if state == "labeled" and not labeled:
                    continue
            view = self.pair_view(rec)
            if app and view.get("app_id") != app:
                continue
            matching += 1
            if len(views) < limit:
                views.append(view)
        return {"pairs": views, "total_matching": matching}

    def _is_labeled(self, pair_id: str, annotator: Optional[str]) -> bool:
        with self._lock:
            if annotator:
                return (pair_id, annotator) in self._labeled_by
            return any(pid == pair_id for pid, _ in self._labeled_by)

    # -- labels ----------------------------------------------------------------

    def submit_label(self, body: dict) -> PairLabel:
        pid = body.get("pair_id")
        annotator = body.get("annotator")
        relevance = body.get("relevance")
        role_name = body.get("role")
        if not isinstance(pid, str) or not isinstance(annotator, str) or not annotator:
            raise HttpError(422, "pair_id and annotator are required strings")
        if pid not in self.pairs:
            raise HttpError(404, f"unknown pair_id {pid!r}")
        if relevance not in (analysis.RELEVANT, analysis.IRRELEVANT):
            raise HttpError(422, "relevance must be 'relevant' or 'irrelevant'")
        role = None
        if role_name is not None:
            try:
                role = Role(role_name)
            except ValueError:
                raise HttpError(422, f"role {role_name!r} is not one of the 8 roles")
            if relevance != analysis.RELEVANT:
                raise HttpError(422, "role is only allowed on relevant labels")

        label = PairLabel(
            pair_id=pid,
            annotator=annotator,
            relevance=relevance,
            role=role,
            labeled_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        with self._lock:
            if (pid, annotator) in self._labeled_by:
                raise HttpError(409, f"{annotator!r} already labeled pair {pid!r}")
            analysis.append_label(self.labels_path, label)
            self._labels.append(label)
            self._labeled_by.add((pid, annotator))
        return label

    def progress(self) -> dict:
        with self._lock:
            per_annotator: dict[str, int] = {}
            labeled_pairs = set()
            for pid, annotator in self._labeled_by:
                per_annotator[annotator] = per_annotator.get(annotator, 0) + 1
                labeled_pairs.add(pid)
        return {
            "labeled": len(labeled_pairs),
            "total": len(self.pairs),
            "per_annotator": dict(sorted(per_annotator.items())),
        }

    def agreement(self, a: Optional[str], b: Optional[str]) -> dict:
        with self._lock:
            labels = list(self._labels)
        by_annotator: dict[str, dict[str, PairLabel]] = {}
        for label in labels:
            by_annotator.setdefault(label.annotator, {})[label.pair_id] = label
        coders = sorted(k for k in by_annotator if k != ADJUDICATOR)
        if a is None or b is None:
            if len(coders) < 2:
                raise HttpError(422, "agreement needs two annotators with labels")
            a, b = coders[0], coders[1]
        if a not in by_annotator or b not in by_annotator:
            raise HttpError(422, f"no labels for annotator {a!r} or {b!r}")

        common = sorted(set(by_annotator[a]) & set(by_annotator[b]))
        if not common:
            raise HttpError(422, f"annotators {a!r} and {b!r} share no labeled pairs")
        labels_a = [by_annotator[a][pid] for pid in common]
        labels_b = [by_annotator[b][pid] for pid in common]
        result = analysis.agreement(labels_a, labels_b)
        adjudicated = {
            l.pair_id for l in labels if l.annotator == ADJUDICATOR
        }
        return {
            "annotators": [a, b],
            "pairs_compared": len(common),
            "percent_agreement": result["percent_agreement"],
            "cohen_kappa": result["cohen_kappa"],
            "disagreements": [
                {
                    "pair_id": pid,
                    "labels": {
                        a: by_annotator[a][pid].to_record(),
                        b: by_annotator[b][pid].to_record(),
                    },
                    "adjudicated": pid in adjudicated,
                }
                for pid in result["disagreements"]
            ],
        }

    def export_labels(self) -> bytes:
        if not self.labels_path.exists():
            return b""
        return self.labels_path.read_bytes()


class HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def make_handler(service: AnnotationService, token: Optional[str] = None,
                 ui_dir: Optional[Path] = None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, status: int, payload) -> None:
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_bytes(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _authorized(self) -> bool:
            if token is None:
                return True
            return self.headers.get("X-Auth-Token") == token

        def _handle(self, method: str) -> None:
            if not self._authorized():
                self._send_json(401, {"error": "missing or invalid X-Auth-Token"})
                return
            url = urlparse(self.path)
            query = {k: v[0] for k, v in parse_qs(url.query).items()}
            try:
                self._route(method, url.path, query)
            except HttpError as exc:
                self._send_json(exc.status, {"error": exc.message})
            except Exception as exc:  # internal error; keep the server up
                self._send_json(500, {"error": f"internal error: {exc}"})

        def _route(self, method: str, path: str, query: dict) -> None:
            if method == "GET" and path == "/api/pairs":
                flag = query.get("in_intersection")
                in_intersection = None if flag is None else flag.lower() == "true"
                self._send_json(200, service.list_pairs(
                    annotator=query.get("annotator"),
                    state=query.get("state", "all"),
                    app=query.get("app"),
                    in_intersection=in_intersection,
                    limit=max(1, int(query.get("limit", "1"))),
                ))
            elif method == "GET" and path.startswith("/api/pairs/"):
                pid = path[len("/api/pairs/"):]
                rec = service.pairs.get(pid)
                if rec is None:
                    raise HttpError(404, f"unknown pair_id {pid!r}")
                self._send_json(200, service.pair_view(rec))
            elif method == "POST" and path == "/api/labels":
                label = service.submit_label(self._read_json())
                self._send_json(201, {"label": label.to_record()})
            elif method == "GET" and path == "/api/progress":
                self._send_json(200, service.progress())
            elif method == "GET" and path == "/api/agreement":
                self._send_json(200, service.agreement(query.get("a"), query.get("b")))
            elif method == "GET" and path == "/api/export":
                self._send_bytes(200, service.export_labels(),
                                 "application/x-ndjson; charset=utf-8")
            elif method == "GET" and ui_dir is not None:
                self._serve_static(path)
            else:
                raise HttpError(404, f"no route for {method} {path}")

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                body = json.loads(raw.decode("utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise HttpError(400, f"request body is not valid JSON: {exc}")
            if not isinstance(body, dict):
                raise HttpError(400, "request body must be a JSON object")
            return body

        def _serve_static(self, path: str) -> None:
            rel = path.lstrip("/") or "index.html"
            target = (ui_dir / rel).resolve()
            if not str(target).startswith(str(ui_dir.resolve())) or not target.is_file():
                raise HttpError(404, f"no such file {rel!r}")
            content_types = {
                ".html": "text/html; charset=utf-8",
                ".js": "text/javascript; charset=utf-8",
                ".css": "text/css; charset=utf-8",
                ".map": "application/json",
            }
            ctype = content_types.get(target.suffix, "application/octet-stream")
            self._send_bytes(200, target.read_bytes(), ctype)

        def do_GET(self):
            self._handle("GET")

        def do_POST(self):
            self._handle("POST")

    return Handler


def create_server(data_dir: str | Path, port: int, token: Optional[str] = None,
                  ui_dir: Optional[str | Path] = None) -> ThreadingHTTPServer:
    service = AnnotationService(data_dir)
    handler = make_handler(service, token=token,
                           ui_dir=Path(ui_dir) if ui_dir else None)
    try:
        server = ThreadingHTTPServer(("127.0.0.1", port), handler)
    except OSError as exc:
        raise ServerError(f"cannot bind port {port}: {exc}") from exc
    server.service = service  # handy for tests
    return server
