"""Query enrichment from the lexical graph.

For each analyzed query token the engine unions over all its candidate
lemmas (morphological ambiguity is kept, not resolved), consults the first
``max_senses`` synsets of each lemma, and harvests:

* synonym candidates: co-members of those synsets;
* hypernym / hyponym candidates: member lemmas of up to
  ``max_concepts_per_relation`` related synsets per sense, up to
  ``max_terms_per_concept`` usable lemmas from each.

Every candidate carries the weight configured for its relation; duplicates
collapse to the highest-weight occurrence. Sense selection under polysemy
is deliberately not attempted: all candidates default to selected and the
final choice belongs to the user validation step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import awn
from .morph import MorphAnalysis
from .normalize import Token, normalize_text

RELATIONS = ("synonym", "hypernym", "hyponym")
_RELATION_RANK = {rel: i for i, rel in enumerate(RELATIONS)}

DEFAULT_WEIGHTS = {"synonym": 0.8, "hypernym": 0.5, "hyponym": 0.5}


@dataclass
class ExpansionConfig:
    """Tuning knobs for the enrichment engine. The defaults are declared
    starting points meant to be swept by the evaluation harness, not
    established optima."""

    relations_enabled: frozenset[str] = frozenset(RELATIONS)
    max_senses: int = 3
    max_concepts_per_relation: int = 2
    max_terms_per_concept: int = 3
    weights: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    include_multiword: bool = False

    # Original query terms always carry full weight.
    original_term_weight: float = 1.0

    def __post_init__(self):
        self.relations_enabled = frozenset(self.relations_enabled)
        unknown = self.relations_enabled - set(RELATIONS)
        if unknown:
            raise ValueError(f"unknown relations: {sorted(unknown)}")
        for cap_name in ("max_senses", "max_concepts_per_relation", "max_terms_per_concept"):
            if getattr(self, cap_name) < 0:
                raise ValueError(f"{cap_name} must be >= 0")
        for rel in RELATIONS:
            w = self.weights.get(rel)
            if w is None or not (0.0 < w <= 1.0):
                raise ValueError(f"weight for {rel} must be in (0, 1], got {w}")
        if self.original_term_weight != 1.0:
            raise ValueError("original_term_weight is fixed at 1.0")

    def with_overrides(self, **kwargs) -> "ExpansionConfig":
        if "weights" in kwargs:
            kwargs["weights"] = {**self.weights, **kwargs["weights"]}
        return replace(self, **kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "ExpansionConfig":
        """Flat key=value file; see save() for the key set."""
        kwargs: dict = {}
        weights = dict(DEFAULT_WEIGHTS)
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key == "relations_enabled":
                kwargs["relations_enabled"] = frozenset(
                    r.strip() for r in value.split(",") if r.strip()
                )
            elif key in ("max_senses", "max_concepts_per_relation", "max_terms_per_concept"):
                kwargs[key] = int(value)
            elif key.startswith("weight_"):
                weights[key[len("weight_"):]] = float(value)
            elif key == "include_multiword":
                kwargs[key] = value.lower() == "true"
            elif key == "original_term_weight":
                kwargs[key] = float(value)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        return cls(weights=weights, **kwargs)

    def save(self, path: str | Path) -> None:
        lines = [
            "relations_enabled=" + ",".join(r for r in RELATIONS if r in self.relations_enabled),
            f"max_senses={self.max_senses}",
            f"max_concepts_per_relation={self.max_concepts_per_relation}",
            f"max_terms_per_concept={self.max_terms_per_concept}",
        ]
        lines += [f"weight_{rel}={self.weights[rel]}" for rel in RELATIONS]
        lines.append(f"include_multiword={'true' if self.include_multiword else 'false'}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class ExpansionCandidate:
    """A proposed additional query term with its provenance."""

    term: str            # normalized; may contain spaces when multiword enabled
    source_lemma: str    # the query lemma it was harvested for
    relation: str        # synonym | hypernym | hyponym
    synset_id: str
    weight: float
    selected: bool = True
    # Emission rank (lemma, sense, relation, sequence); kept so dedup stays ordered.
    sort_key: tuple = field(default=(), repr=False, compare=False)


def _candidate_lemmas(token: Token, analyses: list[MorphAnalysis]) -> list[str]:
    """All candidate lemmas in analysis order; falls back to the normalized
    surface as a pseudo-lemma so out-of-lexicon words still reach the
    lexical graph (and, verbatim, the search backend)."""
    lemmas: list[str] = []
    for analysis in analyses:
        if analysis.entry.lemma not in lemmas:
            lemmas.append(analysis.entry.lemma)
    if not lemmas and token.normalized:
        lemmas.append(token.normalized)
    return lemmas


def _usable_terms(synset: awn.Synset, source_key: str, config: ExpansionConfig,
                  db: awn.LexicalDb) -> list[str]:
    """Member lemmas of a synset as normalized candidate terms, skipping
    the source lemma itself and (by default) multiword concepts."""
    terms = []
    for lemma in synset.lemmas:
        term = " ".join(normalize_text(lemma, db.config).split())
        if not term or term == source_key:
            continue
        if " " in term and not config.include_multiword:
            continue
        if term not in terms:
            terms.append(term)
    return terms


def expand(
    db: awn.LexicalDb,
    analyses: list[tuple[Token, list[MorphAnalysis]]],
    config: ExpansionConfig,
) -> list[tuple[Token, list[ExpansionCandidate]]]:
    """Harvest expansion candidates for each analyzed query token.

    Deterministic: candidates are emitted lemma by lemma, sense by sense,
    relations in the order synonym < hypernym < hyponym, then file order,
    and deduplicated with :func:`dedupe_and_rank`.
    """
    results = []
    for token, token_analyses in analyses:
        raw: list[ExpansionCandidate] = []
        counter = itertools.count()
        for lemma_idx, lemma in enumerate(_candidate_lemmas(token, token_analyses)):
            source_key = normalize_text(lemma, db.config)
            senses = awn.synsets_of(db, lemma)[: config.max_senses]
            for sense_idx, sense in enumerate(senses):
                if "synonym" in config.relations_enabled:
                    for term in _usable_terms(sense, source_key, config, db):
                        raw.append(ExpansionCandidate(
                            term=term, source_lemma=lemma, relation="synonym",
                            synset_id=sense.id, weight=config.weights["synonym"],
                            sort_key=(lemma_idx, sense_idx, 0, next(counter)),
                        ))
                for relation in ("hypernym", "hyponym"):
                    if relation not in config.relations_enabled:
                        continue
                    targets = awn.related(db, sense.id, relation)
                    for target in targets[: config.max_concepts_per_relation]:
                        terms = _usable_terms(target, source_key, config, db)
                        for term in terms[: config.max_terms_per_concept]:
                            raw.append(ExpansionCandidate(
                                term=term, source_lemma=lemma, relation=relation,
                                synset_id=target.id, weight=config.weights[relation],
                                sort_key=(lemma_idx, sense_idx,
                                          _RELATION_RANK[relation], next(counter)),
                            ))
        results.append((token, dedupe_and_rank(raw)))
    return results


def dedupe_and_rank(candidates: list[ExpansionCandidate]) -> list[ExpansionCandidate]:
    """Collapse duplicate terms keeping the highest-weight occurrence
    (ties keep the earliest), at the term's first position. Idempotent;
    input order is preserved otherwise."""
    best: dict[str, ExpansionCandidate] = {}
    order: list[str] = []
    for cand in candidates:
        kept = best.get(cand.term)
        if kept is None:
            best[cand.term] = cand
            order.append(cand.term)
        elif cand.weight > kept.weight:
            best[cand.term] = cand
    return [best[term] for term in order]
