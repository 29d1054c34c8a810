"""Search backends: a local TF-IDF inverted index and a generic external
web-search adapter behind one result shape.

Local index documents are lemmatized with the same analyzer as queries,
so morphological variants of one base form match symmetrically. Scoring
is plain TF-IDF (hand-computable for fixtures):

    score(doc) = sum over query tuples of  weight * tf(term, doc) * idf(term)
    idf(term)  = ln(1 + doc_count / (1 + df(term)))

Only documents with a positive score are returned, sorted by descending
score with ties broken by ascending doc id.

The web adapter POSTs nothing and stores nothing: it fills a URL template
with the serialized boolean query, expects a minimal JSON body
``{"results": [{"url": ..., "title": ..., "snippet": ...}, ...]}`` and
scores hits by reciprocal rank. Any modern engine can be adapted by
fronting it with that shape.
"""

from __future__ import annotations

import json
import math
import threading
from bisect import insort
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote

import requests

from .morph import LinguisticDb, analyze_query, canonical_term


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    body: str


@dataclass(frozen=True)
class SearchResult:
    doc_id: str
    score: float
    rank: int                    # 1-based
    snippet: str | None = None


class Index:
    """In-memory inverted index. A single mutex serializes writes and
    keeps readers from observing a partially added document."""

    def __init__(self, lexdb: LinguisticDb):
        self.lexdb = lexdb
        self.postings: dict[str, list[tuple[str, int]]] = {}
        self.doc_lengths: dict[str, int] = {}
        self.docs: dict[str, Document] = {}
        self._lock = threading.Lock()

    @property
    def doc_count(self) -> int:
        return len(self.doc_lengths)

    def content_terms(self, text: str) -> list[str]:
        """Matching terms for a text: stopwords dropped, each remaining
        token mapped to its lemma when uniquely analyzable, otherwise its
        normalized surface."""
        return [
            canonical_term(token, analyses, self.lexdb.config)
            for token, analyses in analyze_query(self.lexdb, text)
        ]


def index_add(index: Index, doc: Document) -> Index:
    """Add one document (body only is indexed). Duplicate ids are an error."""
    terms = index.content_terms(doc.body)
    with index._lock:
        if doc.id in index.doc_lengths:
            raise ValueError(f"duplicate document id: {doc.id}")
        counts: dict[str, int] = {}
        for term in terms:
            counts[term] = counts.get(term, 0) + 1
        for term, tf in counts.items():
            insort(index.postings.setdefault(term, []), (doc.id, tf))
        index.doc_lengths[doc.id] = len(terms)
        index.docs[doc.id] = doc
    return index


def build_index(lexdb: LinguisticDb, docs: list[Document]) -> Index:
    index = Index(lexdb)
    for doc in docs:
        index_add(index, doc)
    return index


def _snippet(index: Index, doc: Document, terms: list[str], width: int = 160) -> str:
    """Excerpt around the first body token matching a query term."""
    body = doc.body
    for token, analyses in analyze_query(index.lexdb, body):
        if canonical_term(token, analyses, index.lexdb.config) in terms:
            at = body.find(token.surface)
            if at >= 0:
                start = max(0, at - width // 3)
                return ("…" if start else "") + body[start:start + width].strip()
            break
    return body[:width].strip()


def index_search(
    index: Index,
    weighted_query: list[tuple[str, float, int]],
    k: int,
) -> list[SearchResult]:
    """Score the weighted query tuples against the index and return the
    top-k positive-score documents. Zero-weight tuples are a no-op."""
    if k < 1:
        raise ValueError("k must be >= 1")
    with index._lock:
        scores: dict[str, float] = {}
        doc_count = index.doc_count
        for term, weight, _group in weighted_query:
            if weight <= 0.0 or not term:
                continue
            postings = index.postings.get(term)
            if not postings:
                continue
            idf = math.log(1.0 + doc_count / (1.0 + len(postings)))
            for doc_id, tf in postings:
                scores[doc_id] = scores.get(doc_id, 0.0) + weight * tf * idf
        ranked = sorted(
            ((doc_id, score) for doc_id, score in scores.items() if score > 0.0),
            key=lambda item: (-item[1], item[0]),
        )[:k]
        positive_terms = [t for t, w, _ in weighted_query if w > 0.0]
        return [
            SearchResult(
                doc_id=doc_id, score=score, rank=rank,
                snippet=_snippet(index, index.docs[doc_id], positive_terms),
            )
            for rank, (doc_id, score) in enumerate(ranked, 1)
        ]


def load_corpus_tsv(path: str | Path) -> list[Document]:
    """One document per line: id <tab> title <tab> body; '#' comments."""
    docs = []
    seen = set()
    path = Path(path)
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(cols)}")
        doc_id, title, body = (c.strip() for c in cols)
        if not doc_id:
            raise ValueError(f"{path}:{lineno}: empty document id")
        if doc_id in seen:
            raise ValueError(f"{path}:{lineno}: duplicate document id {doc_id}")
        seen.add(doc_id)
        docs.append(Document(id=doc_id, title=title, body=body))
    return docs


def load_corpus_dir(path: str | Path) -> list[Document]:
    """Directory of UTF-8 .txt files; the file name (without extension)
    is the document id, the file content is the body."""
    base = Path(path)
    docs = []
    for file in sorted(base.glob("*.txt")):
        docs.append(Document(id=file.stem, title=file.stem, body=file.read_text(encoding="utf-8").strip()))
    return docs


def save_index_snapshot(index: Index, path: str | Path) -> None:
    """Flat JSON snapshot of the documents (the index is rebuilt on load,
    which keeps the snapshot independent of posting internals)."""
    payload = {
        "documents": [
            {"id": d.id, "title": d.title, "body": d.body} for d in index.docs.values()
        ]
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=1), encoding="utf-8")


def load_index_snapshot(lexdb: LinguisticDb, path: str | Path) -> Index:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    docs = [Document(id=d["id"], title=d["title"], body=d["body"]) for d in payload["documents"]]
    return build_index(lexdb, docs)


# --- external web-search adapter ---------------------------------------


class BackendError(Exception):
    """Base class for web backend failures."""


class BackendNetworkError(BackendError):
    """Connection-level failure after exhausting retries."""


class BackendTimeoutError(BackendError):
    """The endpoint did not answer within the configured timeout."""


class BackendStatusError(BackendError):
    def __init__(self, status: int, message: str = ""):
        super().__init__(f"backend returned HTTP {status}{': ' + message if message else ''}")
        self.status = status


class BackendParseError(BackendError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


@dataclass
class WebBackendConfig:
    """key=value file: url_template (with {query} and optional {k}
    placeholders), timeout_ms, max_retries, max_concurrency."""

    url_template: str
    timeout_ms: int = 5000
    max_retries: int = 0
    max_concurrency: int = 4
    _semaphore: threading.Semaphore = field(init=False, repr=False)

    def __post_init__(self):
        if "{query}" not in self.url_template:
            raise ValueError("url_template must contain a {query} placeholder")
        if self.timeout_ms <= 0 or self.max_retries < 0 or self.max_concurrency < 1:
            raise ValueError("invalid web backend configuration values")
        self._semaphore = threading.Semaphore(self.max_concurrency)

    @classmethod
    def load(cls, path: str | Path) -> "WebBackendConfig":
        values: dict = {}
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "url_template":
                values[key] = value
            elif key in ("timeout_ms", "max_retries", "max_concurrency"):
                values[key] = int(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        if "url_template" not in values:
            raise ValueError(f"{path}: url_template is required")
        return cls(**values)


def _parse_web_results(body: str, k: int) -> list[SearchResult]:
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise BackendParseError(f"response body is not valid JSON: {exc.msg}", exc.pos) from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("results"), list):
        raise BackendParseError('response body must be an object with a "results" list')
    results = []
    for rank, hit in enumerate(payload["results"][:k], 1):
        if not isinstance(hit, dict) or not isinstance(hit.get("url"), str):
            raise BackendParseError(f'result {rank} must be an object with a string "url"')
        results.append(SearchResult(
            doc_id=hit["url"],
            score=1.0 / rank,
            rank=rank,
            snippet=hit.get("snippet") or hit.get("title"),
        ))
    return results


def web_search(config: WebBackendConfig, boolean_query: str, k: int) -> list[SearchResult]:
    """Send a serialized boolean query to the configured endpoint.

    Retries (connection failures, timeouts, HTTP 5xx) never exceed
    max_retries; 4xx statuses and parse failures are not retried. Failures
    surface as distinct BackendError subclasses.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    url = config.url_template.replace("{query}", quote(boolean_query)).replace("{k}", str(k))
    attempts = config.max_retries + 1
    last_error: BackendError | None = None
    with config._semaphore:
        for _ in range(attempts):
            try:
                response = requests.get(url, timeout=config.timeout_ms / 1000.0)
            except requests.exceptions.Timeout:
                last_error = BackendTimeoutError(
                    f"no response within {config.timeout_ms} ms from {url}"
                )
                continue
            except requests.exceptions.RequestException as exc:
                last_error = BackendNetworkError(str(exc))
                continue
            if 500 <= response.status_code < 600:
                last_error = BackendStatusError(response.status_code, "server error")
                continue
            if response.status_code != 200:
                raise BackendStatusError(response.status_code)
            return _parse_web_results(response.text, k)
    assert last_error is not None
    raise last_error
