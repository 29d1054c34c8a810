"""Operational shell: a CLI and an HTTP API exposing the pipeline as
discrete steps (analyze → expand → validate → search) so interfaces and
scripts can drive the human-validation loop.

Every flag has an environment-variable override with a QAMAR_ prefix
(--index-path → QAMAR_INDEX_PATH). Sessions are in-memory with a TTL;
the session store is the only mutable state in the service.

HTTP contract (JSON bodies, UTF-8):

  GET  /health
      -> {"status": "ok", "synsets": n, "words": n, "lexicon_entries": n,
          "stopwords": n, "documents": n}
  POST /analyze           {"text": str}
      -> {"tokens": [{"surface", "normalized", "position",
                      "analyses": [{"proclitic", "prefix", "stem",
                                    "suffix", "enclitic", "lemma", "root",
                                    "pos"}]}]}
  POST /expand            {"text": str, "config": {...}?}
      -> {"session_id": str, "groups": [...], "preview": str}
  GET  /sessions/{id}
      -> same shape as /expand
  POST /sessions/{id}/select
      {"toggles": [{"candidate_id": str, "selected": bool}], "group": int?,
       "selected": bool?}
      -> same shape as /expand (state after the toggles)
  POST /sessions/{id}/search  {"backend": "local"|"web", "k": int}
      -> {"results": [{"doc_id", "score", "rank", "snippet", "title"?}],
          "query": str}

Config overrides accepted in /expand bodies and as CLI flags mirror the
expansion config keys: relations_enabled (list or comma string),
max_senses, max_concepts_per_relation, max_terms_per_concept,
weight_synonym, weight_hypernym, weight_hyponym, include_multiword.

Errors: {"error": {"message": str, "field": str?}} with status 400 for
malformed bodies (field named), 404 for unknown sessions or paths.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import awn as awn_mod, morph
from .evaluation import load_qrels, load_queries, report_to_tsv, run_eval, sweep, sweep_to_tsv
from .expand import RELATIONS, ExpansionConfig
from .normalize import DEFAULT_CONFIG, NormalizeConfig
from .pipeline import Pipeline
from .query import ExpandedQuery, build, serialize_boolean, serialize_weighted
from .search import (
    BackendError,
    Index,
    WebBackendConfig,
    build_index,
    index_search,
    load_corpus_dir,
    load_corpus_tsv,
    load_index_snapshot,
    save_index_snapshot,
    web_search,
)

DEFAULT_SESSION_TTL = 3600.0


class CliError(Exception):
    """User-facing CLI failure; message goes to stderr, exit code 1."""


# --- session store ------------------------------------------------------


@dataclass
class Session:
    id: str
    text: str
    analyses: list
    expansion: list          # [(Token, [ExpansionCandidate])], selection state lives here
    config: ExpansionConfig
    created_at: float
    updated_at: float


class SessionStore:
    """In-memory sessions with a TTL, purged on access. Per-session
    updates are atomic under one lock."""

    def __init__(self, ttl: float = DEFAULT_SESSION_TTL, now=time.monotonic):
        self.ttl = ttl
        self._now = now
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _purge(self) -> None:
        cutoff = self._now() - self.ttl
        for sid in [s for s, sess in self._sessions.items() if sess.updated_at < cutoff]:
            del self._sessions[sid]

    def create(self, text, analyses, expansion, config) -> Session:
        with self._lock:
            self._purge()
            now = self._now()
            session = Session(
                id=uuid.uuid4().hex[:12], text=text, analyses=analyses,
                expansion=expansion, config=config, created_at=now, updated_at=now,
            )
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session:
                session.updated_at = self._now()
            return session

    def toggle(self, session_id: str, toggles: list[tuple[str, bool]],
               group: int | None = None, group_selected: bool | None = None) -> Session | None:
        """Apply candidate toggles ('g<gi>c<ci>' ids) and optional whole-
        group selection atomically."""
        with self._lock:
            self._purge()
            session = self._sessions.get(session_id)
            if session is None:
                return None
            candidates = {
                f"g{gi}c{ci}": cand
                for gi, (_, cands) in enumerate(session.expansion)
                for ci, cand in enumerate(cands)
            }
            for candidate_id, selected in toggles:
                cand = candidates.get(candidate_id)
                if cand is None:
                    raise KeyError(candidate_id)
                cand.selected = bool(selected)
            if group is not None:
                if not 0 <= group < len(session.expansion):
                    raise KeyError(f"group {group}")
                for cand in session.expansion[group][1]:
                    cand.selected = bool(group_selected)
            session.updated_at = self._now()
            return session


# --- application state ----------------------------------------------------


@dataclass
class AppState:
    pipeline: Pipeline
    index: Index | None = None
    web_config: WebBackendConfig | None = None
    sessions: SessionStore = field(default_factory=SessionStore)

    def build_query(self, session: Session) -> ExpandedQuery:
        return build(
            session.analyses, session.expansion, config=session.config,
            norm_config=self.pipeline.lexdb.config,
        )

    def health(self) -> dict:
        synsets = words = 0
        if self.pipeline.awn_db is not None:
            synsets, words = self.pipeline.awn_db.counts()
        counts = self.pipeline.lexdb.counts()
        return {
            "status": "ok",
            "synsets": synsets,
            "words": words,
            "lexicon_entries": counts["lexicon_entries"],
            "stopwords": counts["stopwords"],
            "documents": self.index.doc_count if self.index else 0,
        }


def _config_from_overrides(base: ExpansionConfig, overrides: dict) -> ExpansionConfig:
    """Apply request/CLI overrides (see module docstring for the keys)."""
    kwargs: dict = {}
    weights = dict(base.weights)
    for key, value in overrides.items():
        if key == "relations_enabled":
            if isinstance(value, str):
                value = [r for r in value.split(",") if r.strip()]
            kwargs["relations_enabled"] = frozenset(r.strip() for r in value)
        elif key in ("max_senses", "max_concepts_per_relation", "max_terms_per_concept"):
            kwargs[key] = int(value)
        elif key.startswith("weight_"):
            weights[key[len("weight_"):]] = float(value)
        elif key == "include_multiword":
            kwargs[key] = value if isinstance(value, bool) else str(value).lower() == "true"
        else:
            raise ValueError(key)
    return base.with_overrides(weights=weights, **kwargs)


def _analyses_payload(analyses) -> list[dict]:
    return [
        {
            "surface": token.surface,
            "normalized": token.normalized,
            "position": token.position,
            "analyses": [
                {
                    "proclitic": a.proclitic, "prefix": a.prefix, "stem": a.stem,
                    "suffix": a.suffix, "enclitic": a.enclitic,
                    "lemma": a.entry.lemma, "root": a.entry.root, "pos": a.entry.pos,
                }
                for a in token_analyses
            ],
        }
        for token, token_analyses in analyses
    ]


def _session_payload(state: AppState, session: Session) -> dict:
    awn_db = state.pipeline.awn_db
    groups = []
    for gi, ((token, token_analyses), (_, candidates)) in enumerate(
        zip(session.analyses, session.expansion)
    ):
        groups.append({
            "original": {
                "surface": token.surface,
                "normalized": token.normalized,
                "position": token.position,
            },
            "candidates": [
                {
                    "id": f"g{gi}c{ci}",
                    "term": cand.term,
                    "relation": cand.relation,
                    "weight": cand.weight,
                    "source_lemma": cand.source_lemma,
                    "synset_id": cand.synset_id,
                    "gloss": (
                        awn_db.synsets[cand.synset_id].gloss
                        if awn_db and cand.synset_id in awn_db.synsets else None
                    ),
                    "selected": cand.selected,
                }
                for ci, cand in enumerate(candidates)
            ],
        })
    return {
        "session_id": session.id,
        "text": session.text,
        "groups": groups,
        "preview": serialize_boolean(state.build_query(session)),
    }


# --- HTTP layer -----------------------------------------------------------


class _HttpError(Exception):
    def __init__(self, status: int, message: str, field_name: str | None = None):
        super().__init__(message)
        self.status = status
        self.payload = {"error": {"message": message}}
        if field_name:
            self.payload["error"]["field"] = field_name


def _require(body: dict, field_name: str, kind) -> object:
    value = body.get(field_name)
    if not isinstance(value, kind):
        raise _HttpError(400, f"field {field_name!r} must be {kind.__name__}", field_name)
    return value


class QamarRequestHandler(BaseHTTPRequestHandler):
    state: AppState  # injected by make_server

    def log_message(self, fmt, *args):  # silence default stderr chatter
        pass

    def _send(self, status: int, payload: dict) -> None:
        data = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _HttpError(400, f"request body is not valid JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise _HttpError(400, "request body must be a JSON object")
        return body

    def do_OPTIONS(self):
        self._send(204, {})

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")

    def _route(self, method: str) -> None:
        try:
            path = self.path.split("?", 1)[0].rstrip("/") or "/"
            parts = path.strip("/").split("/")
            if method == "GET" and path == "/health":
                self._send(200, self.state.health())
            elif method == "POST" and path == "/analyze":
                self._send(200, self._handle_analyze())
            elif method == "POST" and path == "/expand":
                self._send(200, self._handle_expand())
            elif len(parts) == 2 and parts[0] == "sessions" and method == "GET":
                self._send(200, self._handle_session_get(parts[1]))
            elif len(parts) == 3 and parts[0] == "sessions" and method == "POST":
                if parts[2] == "select":
                    self._send(200, self._handle_select(parts[1]))
                elif parts[2] == "search":
                    self._send(200, self._handle_search(parts[1]))
                else:
                    raise _HttpError(404, f"unknown endpoint: {path}")
            else:
                raise _HttpError(404, f"unknown endpoint: {path}")
        except _HttpError as exc:
            self._send(exc.status, exc.payload)
        except Exception as exc:  # defensive: never leave the socket hanging
            self._send(500, {"error": {"message": f"{type(exc).__name__}: {exc}"}})

    def _handle_analyze(self) -> dict:
        body = self._read_body()
        text = _require(body, "text", str)
        return {"tokens": _analyses_payload(self.state.pipeline.analyze(text))}

    def _handle_expand(self) -> dict:
        body = self._read_body()
        text = _require(body, "text", str)
        config = self.state.pipeline.config
        if "config" in body:
            overrides = _require(body, "config", dict)
            try:
                config = _config_from_overrides(config, overrides)
            except (ValueError, TypeError) as exc:
                raise _HttpError(400, f"invalid expansion config: {exc}", "config") from exc
        analyses = self.state.pipeline.analyze(text)
        expansion = self.state.pipeline.expand(analyses, config)
        session = self.state.sessions.create(text, analyses, expansion, config)
        return _session_payload(self.state, session)

    def _get_session(self, session_id: str) -> Session:
        session = self.state.sessions.get(session_id)
        if session is None:
            raise _HttpError(404, f"unknown session: {session_id}")
        return session

    def _handle_session_get(self, session_id: str) -> dict:
        return _session_payload(self.state, self._get_session(session_id))

    def _handle_select(self, session_id: str) -> dict:
        self._get_session(session_id)
        body = self._read_body()
        toggles = []
        if "toggles" in body:
            for i, toggle in enumerate(_require(body, "toggles", list)):
                if not isinstance(toggle, dict) or not isinstance(toggle.get("candidate_id"), str) \
                        or not isinstance(toggle.get("selected"), bool):
                    raise _HttpError(
                        400, f"toggles[{i}] needs candidate_id (str) and selected (bool)", "toggles"
                    )
                toggles.append((toggle["candidate_id"], toggle["selected"]))
        group = body.get("group")
        group_selected = body.get("selected")
        if group is not None:
            if not isinstance(group, int) or not isinstance(group_selected, bool):
                raise _HttpError(400, "group toggles need group (int) and selected (bool)", "group")
        try:
            session = self.state.sessions.toggle(
                session_id, toggles, group=group, group_selected=group_selected
            )
        except KeyError as exc:
            raise _HttpError(400, f"unknown candidate reference: {exc.args[0]}", "toggles") from exc
        if session is None:
            raise _HttpError(404, f"unknown session: {session_id}")
        return _session_payload(self.state, session)

    def _handle_search(self, session_id: str) -> dict:
        session = self._get_session(session_id)
        body = self._read_body()
        backend = body.get("backend", "local")
        k = body.get("k", 10)
        if backend not in ("local", "web"):
            raise _HttpError(400, 'field "backend" must be "local" or "web"', "backend")
        if not isinstance(k, int) or k < 1:
            raise _HttpError(400, 'field "k" must be a positive integer', "k")
        query = self.state.build_query(session)
        if backend == "local":
            if self.state.index is None:
                raise _HttpError(400, "no local index configured", "backend")
            results = index_search(self.state.index, serialize_weighted(query), k)
            payload = [
                {
                    "doc_id": r.doc_id, "score": r.score, "rank": r.rank,
                    "snippet": r.snippet,
                    "title": self.state.index.docs[r.doc_id].title,
                }
                for r in results
            ]
        else:
            if self.state.web_config is None:
                raise _HttpError(400, "no web backend configured", "backend")
            try:
                results = web_search(self.state.web_config, serialize_boolean(query), k)
            except BackendError as exc:
                raise _HttpError(502, f"web backend failed: {exc}") from exc
            payload = [
                {"doc_id": r.doc_id, "score": r.score, "rank": r.rank, "snippet": r.snippet}
                for r in results
            ]
        return {"results": payload, "query": serialize_boolean(query)}


def make_server(state: AppState, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (QamarRequestHandler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)


# --- CLI ------------------------------------------------------------------


def _env_default(flag: str, fallback=None):
    return os.environ.get("QAMAR_" + flag.upper().replace("-", "_"), fallback)


def _add_db_flags(parser: argparse.ArgumentParser, need_awn: bool = True) -> None:
    parser.add_argument("--lexdb", default=_env_default("lexdb"),
                        help="linguistic database directory")
    if need_awn:
        parser.add_argument("--awn", default=_env_default("awn"),
                            help="lexical database TSV file")
    parser.add_argument("--config", default=_env_default("config"),
                        help="expansion config file (key=value)")
    parser.add_argument("--norm-config", default=_env_default("norm-config"),
                        help="normalization config file (key=value)")


def _add_expansion_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--relations", default=None,
                        help="comma-separated subset of synonym,hypernym,hyponym")
    parser.add_argument("--max-senses", type=int, default=None)
    parser.add_argument("--max-concepts-per-relation", type=int, default=None)
    parser.add_argument("--max-terms-per-concept", type=int, default=None)
    for rel in RELATIONS:
        parser.add_argument(f"--weight-{rel}", type=float, default=None)
    parser.add_argument("--include-multiword", action="store_true", default=None)


def _expansion_overrides(args) -> dict:
    overrides: dict = {}
    if args.relations is not None:
        overrides["relations_enabled"] = args.relations
    for key in ("max_senses", "max_concepts_per_relation", "max_terms_per_concept"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    for rel in RELATIONS:
        value = getattr(args, f"weight_{rel}")
        if value is not None:
            overrides[f"weight_{rel}"] = value
    if args.include_multiword is not None:
        overrides["include_multiword"] = args.include_multiword
    return overrides


def _load_pipeline(args, need_awn: bool = True) -> Pipeline:
    if not args.lexdb:
        raise CliError("--lexdb is required (or set QAMAR_LEXDB)")
    norm_config = (
        NormalizeConfig.load(args.norm_config) if args.norm_config else DEFAULT_CONFIG
    )
    try:
        lexdb = morph.load_linguistic_db(args.lexdb, norm_config)
    except morph.DbLoadError as exc:
        raise CliError(str(exc)) from exc
    awn_db = None
    awn_path = getattr(args, "awn", None)
    if need_awn and awn_path:
        try:
            awn_db = awn_mod.load_lexical_db(awn_path, norm_config)
        except awn_mod.AwnLoadError as exc:
            raise CliError(str(exc)) from exc
    config = None
    if args.config:
        config = ExpansionConfig.load(args.config)
    pipeline = Pipeline(lexdb, awn_db, config)
    overrides = _expansion_overrides(args) if hasattr(args, "relations") else {}
    if overrides:
        pipeline.expansion_config = _config_from_overrides(pipeline.config, overrides)
    return pipeline


def _load_index(args, pipeline: Pipeline) -> Index:
    if getattr(args, "index_path", None):
        return load_index_snapshot(pipeline.lexdb, args.index_path)
    if getattr(args, "corpus", None):
        corpus_path = Path(args.corpus)
        docs = load_corpus_dir(corpus_path) if corpus_path.is_dir() else load_corpus_tsv(corpus_path)
        return build_index(pipeline.lexdb, docs)
    raise CliError("a local index needs --corpus or --index-path")


def _print_analyses(analyses, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"tokens": _analyses_payload(analyses)}, ensure_ascii=False, indent=1))
        return
    for token, token_analyses in analyses:
        if not token_analyses:
            print(f"{token.surface}\t{token.normalized}\t-")
        for a in token_analyses:
            segments = "+".join(seg or "_" for seg in
                                (a.proclitic, a.prefix, a.stem, a.suffix, a.enclitic))
            print(f"{token.surface}\t{segments}\t{a.entry.lemma}\t{a.entry.pos}")


def _cmd_analyze(args) -> int:
    pipeline = _load_pipeline(args, need_awn=False)
    _print_analyses(pipeline.analyze(args.text), args.json)
    return 0


def _cmd_expand(args) -> int:
    pipeline = _load_pipeline(args)
    if pipeline.awn_db is None:
        raise CliError("--awn is required for expansion (or set QAMAR_AWN)")
    analyses = pipeline.analyze(args.text)
    expansion = pipeline.expand(analyses)
    if args.json:
        payload = [
            {
                "original": token.surface,
                "candidates": [
                    {"term": c.term, "relation": c.relation, "weight": c.weight,
                     "source_lemma": c.source_lemma, "synset_id": c.synset_id}
                    for c in candidates
                ],
            }
            for token, candidates in expansion
        ]
        print(json.dumps({"groups": payload}, ensure_ascii=False, indent=1))
    else:
        print("original\tterm\trelation\tweight\tsynset")
        for token, candidates in expansion:
            for c in candidates:
                print(f"{token.surface}\t{c.term}\t{c.relation}\t{c.weight}\t{c.synset_id}")
    query = build(analyses, expansion, config=pipeline.config,
                  norm_config=pipeline.lexdb.config)
    print(f"# query: {serialize_boolean(query)}")
    return 0


def _cmd_search(args) -> int:
    pipeline = _load_pipeline(args)
    if args.no_expand or pipeline.awn_db is None:
        query = pipeline.build_baseline(args.text)
    else:
        query = pipeline.build_expanded(args.text)
    boolean = serialize_boolean(query)
    if args.backend == "web":
        if not args.web_config:
            raise CliError("--web-config is required for the web backend")
        try:
            results = web_search(WebBackendConfig.load(args.web_config), boolean, args.k)
        except BackendError as exc:
            raise CliError(str(exc)) from exc
    else:
        index = _load_index(args, pipeline)
        results = index_search(index, serialize_weighted(query), args.k)
    if args.json:
        print(json.dumps({
            "query": boolean,
            "results": [
                {"doc_id": r.doc_id, "score": r.score, "rank": r.rank, "snippet": r.snippet}
                for r in results
            ],
        }, ensure_ascii=False, indent=1))
    else:
        print(f"# query: {boolean}")
        for r in results:
            print(f"{r.rank}\t{r.doc_id}\t{r.score:.4f}\t{r.snippet or ''}")
    return 0


def _cmd_index(args) -> int:
    pipeline = _load_pipeline(args, need_awn=False)
    corpus_path = Path(args.corpus)
    docs = load_corpus_dir(corpus_path) if corpus_path.is_dir() else load_corpus_tsv(corpus_path)
    index = build_index(pipeline.lexdb, docs)
    save_index_snapshot(index, args.index_path)
    print(f"indexed {index.doc_count} documents, {len(index.postings)} terms -> {args.index_path}")
    return 0


def _cmd_eval(args) -> int:
    pipeline = _load_pipeline(args)
    if pipeline.awn_db is None:
        raise CliError("--awn is required for evaluation")
    corpus_path = Path(args.corpus)
    docs = load_corpus_dir(corpus_path) if corpus_path.is_dir() else load_corpus_tsv(corpus_path)
    queries = load_queries(args.queries)
    qrels = load_qrels(args.qrels)
    try:
        if args.sweep:
            grid: dict[str, list] = {}
            for sweep_arg in args.sweep:
                if "=" not in sweep_arg:
                    raise CliError(f"bad --sweep value {sweep_arg!r}, expected KEY=V1,V2")
                key, _, values = sweep_arg.partition("=")
                parsed = []
                for v in values.split(","):
                    v = v.strip()
                    try:
                        parsed.append(int(v))
                    except ValueError:
                        try:
                            parsed.append(float(v))
                        except ValueError:
                            parsed.append(v)
                grid[key.strip()] = parsed
            output = sweep_to_tsv(sweep(pipeline, docs, queries, qrels, args.k, grid))
        else:
            output = report_to_tsv(run_eval(pipeline, docs, queries, qrels, args.k))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(output)
    return 0


def _cmd_serve(args) -> int:
    pipeline = _load_pipeline(args)
    index = None
    if args.corpus or args.index_path:
        index = _load_index(args, pipeline)
    web_config = WebBackendConfig.load(args.web_config) if args.web_config else None
    state = AppState(
        pipeline=pipeline, index=index, web_config=web_config,
        sessions=SessionStore(ttl=args.session_ttl),
    )
    server = make_server(state, args.port)
    print(f"listening on http://127.0.0.1:{args.port} "
          f"(synsets={state.health()['synsets']}, documents={state.health()['documents']})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qamar",
        description="Arabic query expansion: analyze, expand, validate, search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="morphological analysis of a query")
    p_analyze.add_argument("text")
    p_analyze.add_argument("--json", action="store_true")
    _add_db_flags(p_analyze, need_awn=False)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_expand = sub.add_parser("expand", help="print expansion candidates for a query")
    p_expand.add_argument("text")
    p_expand.add_argument("--json", action="store_true")
    _add_db_flags(p_expand)
    _add_expansion_flags(p_expand)
    p_expand.set_defaults(func=_cmd_expand)

    p_search = sub.add_parser("search", help="run a query against a backend")
    p_search.add_argument("text")
    p_search.add_argument("--no-expand", action="store_true",
                          help="send the query as-is, no enrichment step")
    p_search.add_argument("--backend", choices=("local", "web"),
                          default=_env_default("backend", "local"))
    p_search.add_argument("--corpus", default=_env_default("corpus"))
    p_search.add_argument("--index-path", default=_env_default("index-path"))
    p_search.add_argument("--web-config", default=_env_default("web-config"))
    p_search.add_argument("-k", type=int, default=10)
    p_search.add_argument("--json", action="store_true")
    _add_db_flags(p_search)
    _add_expansion_flags(p_search)
    p_search.set_defaults(func=_cmd_search)

    p_index = sub.add_parser("index", help="build a local index snapshot from a corpus")
    p_index.add_argument("--corpus", required=True,
                         help="corpus TSV file or directory of .txt files")
    p_index.add_argument("--index-path", required=True, help="snapshot output path")
    _add_db_flags(p_index, need_awn=False)
    p_index.set_defaults(func=_cmd_index)

    p_eval = sub.add_parser("eval", help="baseline-vs-expanded evaluation over a corpus")
    p_eval.add_argument("--corpus", default=_env_default("corpus"), required=False)
    p_eval.add_argument("--queries", required=True)
    p_eval.add_argument("--qrels", required=True)
    p_eval.add_argument("-k", type=int, default=10)
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("--sweep", action="append", default=None, metavar="KEY=V1,V2",
                        help="sweep a config key over values; repeatable")
    _add_db_flags(p_eval)
    _add_expansion_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=int(_env_default("port", "8091")))
    p_serve.add_argument("--backend", choices=("local", "web"),
                         default=_env_default("backend", "local"))
    p_serve.add_argument("--corpus", default=_env_default("corpus"))
    p_serve.add_argument("--index-path", default=_env_default("index-path"))
    p_serve.add_argument("--web-config", default=_env_default("web-config"))
    p_serve.add_argument("--session-ttl", type=float,
                         default=float(_env_default("session-ttl", str(DEFAULT_SESSION_TTL))))
    _add_db_flags(p_serve)
    _add_expansion_flags(p_serve)
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
