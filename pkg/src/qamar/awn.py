"""Arabic WordNet model: synsets as nodes, typed relations as arcs.

The database is a flat TSV with two record kinds::

    S <tab> id <tab> pos <tab> lemma1;lemma2;... <tab> gloss   (gloss optional)
    R <tab> source_id <tab> hypernym|hyponym <tab> target_id

'#' starts a comment line. Stored lemmas keep their vocalization for
display; the lookup index is keyed by normalized forms, resolving voweled
input and voweled database entries to the same key.

Lemma lookup is recall-oriented: a query form reaches both the synsets
that contain it verbatim (after normalization) and the synsets containing
a derivationally related word, detected as the query's letters appearing
in order inside a member lemma (e.g. a triliteral base form reaches its
derived nouns of place, verbal nouns and participles). Family matching
only applies to keys of three or more letters and can be switched off
per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .normalize import DEFAULT_CONFIG, NormalizeConfig, normalize_text

SYNSET_POS = ("noun", "verb", "adjective", "adverb")
RELATION_TYPES = ("hypernym", "hyponym")
_INVERSE = {"hypernym": "hyponym", "hyponym": "hypernym"}

FAMILY_MIN_KEY_LENGTH = 3


class AwnLoadError(Exception):
    """A lexical database file could not be loaded."""


@dataclass(frozen=True)
class Synset:
    id: str
    pos: str
    lemmas: tuple[str, ...]                    # ordered, vocalization preserved
    gloss: str | None
    relations: tuple[tuple[str, str], ...]     # (relation_type, target id), file order


class LexicalDb:
    """Immutable after load; all lookups are read-only."""

    def __init__(self, synsets: dict[str, Synset], config: NormalizeConfig = DEFAULT_CONFIG):
        self.synsets = dict(synsets)
        self.config = config
        self._file_order = {sid: i for i, sid in enumerate(self.synsets)}
        # Exact inverse of lemma membership: normalized lemma -> synset ids.
        self.index: dict[str, list[str]] = {}
        for synset in self.synsets.values():
            for lemma in synset.lemmas:
                key = normalize_text(lemma, config)
                ids = self.index.setdefault(key, [])
                if synset.id not in ids:
                    ids.append(synset.id)

    def counts(self) -> tuple[int, int]:
        """(synset count, distinct word count); words are counted as
        distinct lemma strings as written in the source file."""
        words = {lemma for s in self.synsets.values() for lemma in s.lemmas}
        return len(self.synsets), len(words)


def _parse_synset_line(path, lineno: int, cols: list[str]) -> Synset:
    if len(cols) not in (4, 5):
        raise AwnLoadError(f"{path}:{lineno}: S record needs 4 or 5 fields, got {len(cols)}")
    _, sid, pos, lemma_field = (c.strip() for c in cols[:4])
    gloss = cols[4].strip() or None if len(cols) == 5 else None
    if not sid:
        raise AwnLoadError(f"{path}:{lineno}: empty synset id")
    if pos not in SYNSET_POS:
        raise AwnLoadError(f"{path}:{lineno}: unknown pos {pos!r}")
    lemmas = tuple(l.strip() for l in lemma_field.split(";") if l.strip())
    if not lemmas:
        raise AwnLoadError(f"{path}:{lineno}: synset {sid} has no lemmas")
    if len(set(lemmas)) != len(lemmas):
        raise AwnLoadError(f"{path}:{lineno}: duplicate lemma within synset {sid}")
    return Synset(id=sid, pos=pos, lemmas=lemmas, gloss=gloss, relations=())


def load_lexical_db(path: str | Path, config: NormalizeConfig = DEFAULT_CONFIG) -> LexicalDb:
    """Load and validate a lexical database file.

    Dangling relation targets and duplicate synset ids are load errors.
    Hypernym/hyponym arcs are completed so the two directions are mutually
    inverse after load.
    """
    path = Path(path)
    if not path.is_file():
        raise AwnLoadError(f"missing lexical database file: {path}")

    synsets: dict[str, Synset] = {}
    arcs: list[tuple[int, str, str, str]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        kind = cols[0].strip()
        if kind == "S":
            synset = _parse_synset_line(path, lineno, cols)
            if synset.id in synsets:
                raise AwnLoadError(f"{path}:{lineno}: duplicate synset id {synset.id}")
            synsets[synset.id] = synset
        elif kind == "R":
            if len(cols) != 4:
                raise AwnLoadError(f"{path}:{lineno}: R record needs 4 fields, got {len(cols)}")
            _, src, rel, dst = (c.strip() for c in cols)
            if rel not in RELATION_TYPES:
                raise AwnLoadError(f"{path}:{lineno}: unknown relation type {rel!r}")
            arcs.append((lineno, src, rel, dst))
        else:
            raise AwnLoadError(f"{path}:{lineno}: unknown record kind {kind!r}")

    relations: dict[str, list[tuple[str, str]]] = {sid: [] for sid in synsets}
    for lineno, src, rel, dst in arcs:
        if src not in synsets:
            raise AwnLoadError(f"{path}:{lineno}: relation source {src!r} does not resolve")
        if dst not in synsets:
            raise AwnLoadError(
                f"{path}:{lineno}: relation target {dst!r} (from {src!r}) does not resolve"
            )
        if (rel, dst) not in relations[src]:
            relations[src].append((rel, dst))
    # Complete missing inverse arcs: (a hypernym b) <=> (b hyponym a).
    for src in list(relations):
        for rel, dst in list(relations[src]):
            inverse = (_INVERSE[rel], src)
            if inverse not in relations[dst]:
                relations[dst].append(inverse)

    completed = {
        sid: Synset(
            id=s.id, pos=s.pos, lemmas=s.lemmas, gloss=s.gloss,
            relations=tuple(relations[sid]),
        )
        for sid, s in synsets.items()
    }
    return LexicalDb(completed, config)


def _is_subsequence(needle: str, haystack: str) -> bool:
    it = iter(haystack)
    return all(ch in it for ch in needle)


def synsets_of(
    db: LexicalDb,
    lemma: str,
    pos: str | None = None,
    family: bool = True,
) -> list[Synset]:
    """Synsets reachable from a lemma, in source-file (sense) order.

    The lookup key is the normalized lemma. With ``family`` enabled (the
    default), synsets containing a derivationally related member (the key's
    letters in order) are included as well. Unknown lemmas yield [].
    """
    key = normalize_text(lemma, db.config)
    if not key:
        return []
    ids = set(db.index.get(key, ()))
    if family and len(key) >= FAMILY_MIN_KEY_LENGTH:
        for member_key, member_ids in db.index.items():
            if _is_subsequence(key, member_key):
                ids.update(member_ids)
    ordered = sorted(ids, key=db._file_order.__getitem__)
    result = [db.synsets[sid] for sid in ordered]
    if pos is not None:
        result = [s for s in result if s.pos == pos]
    return result


def related(db: LexicalDb, synset_id: str, relation: str) -> list[Synset]:
    """Targets of matching arcs, in arc order. Unknown ids raise KeyError."""
    if synset_id not in db.synsets:
        raise KeyError(f"unknown synset id: {synset_id!r}")
    if relation not in RELATION_TYPES:
        raise ValueError(f"unknown relation type: {relation!r}")
    return [
        db.synsets[target]
        for rel, target in db.synsets[synset_id].relations
        if rel == relation
    ]


def concept_list(db: LexicalDb, lemma: str, family: bool = True) -> list[tuple[str, list[str]]]:
    """For each synset the lemma reaches, its id and full member-lemma
    list: one row per concept, display vocalization preserved."""
    return [(s.id, list(s.lemmas)) for s in synsets_of(db, lemma, family=family)]
