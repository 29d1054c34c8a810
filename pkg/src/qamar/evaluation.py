"""Offline measurement of expansion effect: baseline vs expanded retrieval
over a corpus with relevance judgments, plus knob sweeps and per-relation
ablations.

Reported per query and variant: precision@k, recall and average precision.
Recall improvements quantify silence reduction; precision is reported but
never gated — expansion legitimately trades precision for recall and the
noise hypothesis is left to the numbers.

TSV column order (fixed):
query_id, variant, k, retrieved, relevant, relevant_retrieved,
precision_at_k, recall, average_precision
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .expand import ExpansionConfig
from .pipeline import Pipeline
from .query import serialize_weighted
from .search import Document, Index, build_index, index_search

REPORT_COLUMNS = (
    "query_id", "variant", "k", "retrieved", "relevant", "relevant_retrieved",
    "precision_at_k", "recall", "average_precision",
)

AGGREGATE_ID = "ALL"

Qrels = dict[str, set[str]]


def load_queries(path: str | Path) -> list[tuple[str, str]]:
    """queries.tsv: query id <tab> Arabic text; '#' comments."""
    path = Path(path)
    queries = []
    seen = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
        qid, text = cols[0].strip(), cols[1].strip()
        if not qid or qid in seen:
            raise ValueError(f"{path}:{lineno}: missing or duplicate query id")
        seen.add(qid)
        queries.append((qid, text))
    return queries


def load_qrels(path: str | Path) -> Qrels:
    """qrels.tsv: query id <tab> relevant doc id; '#' comments."""
    path = Path(path)
    qrels: Qrels = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
        qid, doc_id = cols[0].strip(), cols[1].strip()
        if not qid or not doc_id:
            raise ValueError(f"{path}:{lineno}: empty id")
        qrels.setdefault(qid, set()).add(doc_id)
    return qrels


@dataclass(frozen=True)
class Metrics:
    k: int
    retrieved: int
    relevant: int
    relevant_retrieved: int
    precision_at_k: float
    recall: float
    average_precision: float


@dataclass(frozen=True)
class EvalRow:
    query_id: str
    variant: str
    metrics: Metrics


@dataclass
class EvalReport:
    k: int
    config: ExpansionConfig
    rows: list[EvalRow] = field(default_factory=list)

    def row(self, query_id: str, variant: str) -> EvalRow:
        for r in self.rows:
            if r.query_id == query_id and r.variant == variant:
                return r
        raise KeyError((query_id, variant))

    def variants(self) -> list[str]:
        seen: list[str] = []
        for r in self.rows:
            if r.variant not in seen:
                seen.append(r.variant)
        return seen


def compute_metrics(ranked_doc_ids: list[str], relevant: set[str], k: int) -> Metrics:
    """Standard set-based metrics over a ranked list cut at k. Average
    precision uses the full relevant count as denominator."""
    top = ranked_doc_ids[:k]
    hits = [doc_id for doc_id in top if doc_id in relevant]
    precision_at_k = len(hits) / k if k else 0.0
    recall = len(hits) / len(relevant) if relevant else 0.0
    ap = 0.0
    if relevant:
        found = 0
        for rank, doc_id in enumerate(top, 1):
            if doc_id in relevant:
                found += 1
                ap += found / rank
        ap /= len(relevant)
    return Metrics(
        k=k, retrieved=len(top), relevant=len(relevant), relevant_retrieved=len(hits),
        precision_at_k=precision_at_k, recall=recall, average_precision=ap,
    )


def _validate_ids(
    corpus: list[Document], queries: list[tuple[str, str]], qrels: Qrels
) -> None:
    doc_ids = {d.id for d in corpus}
    query_ids = {qid for qid, _ in queries}
    unknown_docs = sorted({d for docs in qrels.values() for d in docs} - doc_ids)
    unknown_queries = sorted(set(qrels) - query_ids)
    missing_qrels = sorted(query_ids - set(qrels))
    problems = []
    if unknown_docs:
        problems.append(f"qrels reference unknown doc ids: {unknown_docs}")
    if unknown_queries:
        problems.append(f"qrels reference unknown query ids: {unknown_queries}")
    if missing_qrels:
        problems.append(f"queries without qrels: {missing_qrels}")
    if problems:
        raise ValueError("; ".join(problems))


def _run_query(pipeline: Pipeline, index: Index, text: str, k: int,
               config: ExpansionConfig | None) -> list[str]:
    if config is None:
        q = pipeline.build_baseline(text)
    else:
        q = pipeline.build_expanded(text, config)
    return [r.doc_id for r in index_search(index, serialize_weighted(q), k)]


def run_eval(
    pipeline: Pipeline,
    corpus: list[Document],
    queries: list[tuple[str, str]],
    qrels: Qrels,
    k: int,
    config: ExpansionConfig | None = None,
) -> EvalReport:
    """Run every query twice (expansion off / on) plus one ablation per
    enabled relation, and aggregate arithmetic means over queries."""
    if k < 1:
        raise ValueError("k must be >= 1")
    _validate_ids(corpus, queries, qrels)
    config = config or pipeline.config
    index = build_index(pipeline.lexdb, corpus)

    variants: list[tuple[str, ExpansionConfig | None]] = [
        ("baseline", None),
        ("expanded", config),
    ]
    for rel in sorted(config.relations_enabled):
        ablated = config.with_overrides(relations_enabled=config.relations_enabled - {rel})
        variants.append((f"ablation_no_{rel}", ablated))

    report = EvalReport(k=k, config=config)
    for qid, text in sorted(queries):
        relevant = qrels[qid]
        for variant, variant_config in variants:
            ranked = _run_query(pipeline, index, text, k, variant_config)
            report.rows.append(EvalRow(qid, variant, compute_metrics(ranked, relevant, k)))

    for variant, _ in variants:
        rows = [r.metrics for r in report.rows if r.variant == variant]
        n = len(rows)
        report.rows.append(EvalRow(AGGREGATE_ID, variant, Metrics(
            k=k,
            retrieved=sum(m.retrieved for m in rows),
            relevant=sum(m.relevant for m in rows),
            relevant_retrieved=sum(m.relevant_retrieved for m in rows),
            precision_at_k=sum(m.precision_at_k for m in rows) / n,
            recall=sum(m.recall for m in rows) / n,
            average_precision=sum(m.average_precision for m in rows) / n,
        )))
    return report


def report_to_tsv(report: EvalReport) -> str:
    lines = ["\t".join(REPORT_COLUMNS)]
    for row in report.rows:
        m = row.metrics
        lines.append("\t".join([
            row.query_id, row.variant, str(m.k), str(m.retrieved), str(m.relevant),
            str(m.relevant_retrieved),
            f"{m.precision_at_k:.4f}", f"{m.recall:.4f}", f"{m.average_precision:.4f}",
        ]))
    return "\n".join(lines) + "\n"


def sweep(
    pipeline: Pipeline,
    corpus: list[Document],
    queries: list[tuple[str, str]],
    qrels: Qrels,
    k: int,
    grid: dict[str, list],
) -> list[tuple[dict, EvalReport]]:
    """One run_eval per point of the cartesian grid. Grid keys are
    ExpansionConfig field names, with weight_<relation> for weights."""
    if not grid:
        raise ValueError("empty sweep grid")
    base = pipeline.config
    points = []
    keys = list(grid)
    for values in itertools.product(*(grid[key] for key in keys)):
        params = dict(zip(keys, values))
        overrides: dict = {}
        weights = dict(base.weights)
        for key, value in params.items():
            if key.startswith("weight_"):
                weights[key[len("weight_"):]] = float(value)
            else:
                overrides[key] = value
        config = base.with_overrides(weights=weights, **overrides)
        points.append((params, run_eval(pipeline, corpus, queries, qrels, k, config)))
    return points


def sweep_to_tsv(points: list[tuple[dict, EvalReport]]) -> str:
    """Aggregate baseline/expanded metrics per grid point, one line each."""
    header = [
        "grid_point", "baseline_recall", "expanded_recall",
        "baseline_precision_at_k", "expanded_precision_at_k",
        "baseline_average_precision", "expanded_average_precision",
    ]
    lines = ["\t".join(header)]
    for params, report in points:
        point = ";".join(f"{k}={v}" for k, v in params.items())
        base = report.row(AGGREGATE_ID, "baseline").metrics
        expanded = report.row(AGGREGATE_ID, "expanded").metrics
        lines.append("\t".join([
            point,
            f"{base.recall:.4f}", f"{expanded.recall:.4f}",
            f"{base.precision_at_k:.4f}", f"{expanded.precision_at_k:.4f}",
            f"{base.average_precision:.4f}", f"{expanded.average_precision:.4f}",
        ]))
    return "\n".join(lines) + "\n"
