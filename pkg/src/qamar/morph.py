"""Out-of-context morphological analysis for Arabic query forms.

The analyzer works in two steps: a stopword lexicon is consulted first,
then each remaining form is exhaustively decomposed into five segments
(proclitic, prefix, stem, suffix, enclitic) against the clitic and affix
tables, keeping only decompositions whose stem is verified against the
lexicon of simple forms. Each verified decomposition carries the lexicon
entry (base form, root, part of speech, features).

No clitic/affix co-occurrence constraints are modeled: the tables are
consulted independently and overgeneration is pruned by dictionary
membership alone. All valid analyses are returned; ranking is
longest-stem-first and downstream consumers union over candidate lemmas.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .normalize import DEFAULT_CONFIG, NormalizeConfig, Token, normalize_text, tokenize

POS_VALUES = ("noun", "verb", "adjective", "adverb", "particle")


class DbLoadError(Exception):
    """A linguistic database directory could not be loaded."""


@dataclass(frozen=True)
class LexiconEntry:
    stem: str                 # normalized dictionary form
    lemma: str                # base form (citation form sent to WordNet)
    root: str                 # consonantal radical, carried as metadata
    pos: str                  # one of POS_VALUES
    features: frozenset[str] = frozenset()


@dataclass(frozen=True)
class MorphAnalysis:
    """One decomposition hypothesis. Invariant:
    proclitic + prefix + stem + suffix + enclitic == surface (the
    normalized form that was analyzed)."""

    surface: str
    proclitic: str
    prefix: str
    stem: str
    suffix: str
    enclitic: str
    entry: LexiconEntry

    @property
    def lemma(self) -> str:
        return self.entry.lemma


class LinguisticDb:
    """Immutable after construction; every operation is read-only.

    Affix tables keep file order for deterministic candidate enumeration;
    the empty string is an implicit member of each and never stored.
    The lexicon is a multimap: homographic stems keep all their entries.
    """

    def __init__(
        self,
        stopwords: set[str],
        proclitics: list[str],
        prefixes: list[str],
        suffixes: list[str],
        enclitics: list[str],
        lexicon: dict[str, list[LexiconEntry]],
        config: NormalizeConfig = DEFAULT_CONFIG,
    ):
        for name, table in (("proclitics", proclitics), ("prefixes", prefixes),
                            ("suffixes", suffixes), ("enclitics", enclitics)):
            if "" in table:
                raise ValueError(f"{name} must not contain the empty string (it is implicit)")
        self.stopwords = frozenset(stopwords) - {""}
        self.proclitics = tuple(proclitics)
        self.prefixes = tuple(prefixes)
        self.suffixes = tuple(suffixes)
        self.enclitics = tuple(enclitics)
        self.lexicon = {stem: tuple(entries) for stem, entries in lexicon.items()}
        self.config = config
        # lemma -> stems carrying it, in lexicon order (used by derive_forms)
        self._stems_by_lemma: dict[str, list[str]] = {}
        for stem, entries in self.lexicon.items():
            for entry in entries:
                key = normalize_text(entry.lemma, config)
                stems = self._stems_by_lemma.setdefault(key, [])
                if stem not in stems:
                    stems.append(stem)

    def counts(self) -> dict[str, int]:
        return {
            "stopwords": len(self.stopwords),
            "proclitics": len(self.proclitics),
            "prefixes": len(self.prefixes),
            "suffixes": len(self.suffixes),
            "enclitics": len(self.enclitics),
            "lexicon_stems": len(self.lexicon),
            "lexicon_entries": sum(len(v) for v in self.lexicon.values()),
        }


def _read_wordlist(path: Path, config: NormalizeConfig) -> list[str]:
    """One form per line; '#' comments and blank lines skipped; duplicates
    collapse keeping first occurrence. Entries must normalize to a single
    non-empty whitespace-free form."""
    if not path.is_file():
        raise DbLoadError(f"missing database file: {path}")
    seen: list[str] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        form = normalize_text(line, config)
        if not form:
            raise DbLoadError(f"{path}:{lineno}: entry normalizes to the empty string")
        if any(ch.isspace() for ch in form):
            raise DbLoadError(f"{path}:{lineno}: entry contains whitespace: {line!r}")
        if form not in seen:
            seen.append(form)
    return seen


def _read_lexicon(path: Path, config: NormalizeConfig) -> dict[str, list[LexiconEntry]]:
    if not path.is_file():
        raise DbLoadError(f"missing database file: {path}")
    lexicon: dict[str, list[LexiconEntry]] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (4, 5):
            raise DbLoadError(
                f"{path}:{lineno}: expected 4 or 5 tab-separated fields, got {len(cols)}"
            )
        stem_raw, lemma, root, pos = (c.strip() for c in cols[:4])
        features = frozenset(f.strip() for f in cols[4].split(";") if f.strip()) if len(cols) == 5 else frozenset()
        if pos not in POS_VALUES:
            raise DbLoadError(f"{path}:{lineno}: unknown pos {pos!r}")
        stem = normalize_text(stem_raw, config)
        if not stem or not lemma or not root:
            raise DbLoadError(f"{path}:{lineno}: stem, lemma and root must be non-empty")
        entry = LexiconEntry(stem=stem, lemma=lemma, root=root, pos=pos, features=features)
        lexicon.setdefault(stem, []).append(entry)
    return lexicon


def load_linguistic_db(path: str | Path, config: NormalizeConfig = DEFAULT_CONFIG) -> LinguisticDb:
    """Load a database directory: stopwords.txt, proclitics.txt,
    prefixes.txt, suffixes.txt, enclitics.txt, lexicon.tsv. All keys are
    normalized on load."""
    base = Path(path)
    if not base.is_dir():
        raise DbLoadError(f"not a database directory: {base}")
    return LinguisticDb(
        stopwords=set(_read_wordlist(base / "stopwords.txt", config)),
        proclitics=_read_wordlist(base / "proclitics.txt", config),
        prefixes=_read_wordlist(base / "prefixes.txt", config),
        suffixes=_read_wordlist(base / "suffixes.txt", config),
        enclitics=_read_wordlist(base / "enclitics.txt", config),
        lexicon=_read_lexicon(base / "lexicon.tsv", config),
        config=config,
    )


def is_stopword(db: LinguisticDb, token: Token) -> bool:
    """True iff the token's normalized form is a function word. The empty
    form never matches."""
    return bool(token.normalized) and token.normalized in db.stopwords


def segment(db: LinguisticDb, form: str) -> list[MorphAnalysis]:
    """Exhaustively decompose a normalized form into five segments.

    Every combination of (proclitic, prefix, suffix, enclitic) from the
    affix tables (plus the implicit empty string) whose residue is a
    lexicon stem yields one analysis per matching lexicon entry. The empty
    list means the form is unknown.

    Ordering: descending stem length, then fewer non-empty affix slots,
    then lexicographic on (proclitic, prefix, suffix, enclitic); lexicon
    entries for one decomposition stay in lexicon file order.
    """
    lexicon = db.lexicon
    decompositions = []
    for pro in _leading_options(form, db.proclitics):
        after_pro = form[len(pro):]
        for pre in _leading_options(after_pro, db.prefixes):
            core = after_pro[len(pre):]
            for enc in _trailing_options(core, db.enclitics):
                middle = core[: len(core) - len(enc)] if enc else core
                for suf in _trailing_options(middle, db.suffixes):
                    stem = middle[: len(middle) - len(suf)] if suf else middle
                    if stem and stem in lexicon:
                        decompositions.append((pro, pre, stem, suf, enc))

    def order(d: tuple[str, str, str, str, str]):
        pro, pre, stem, suf, enc = d
        nonempty = sum(1 for seg in (pro, pre, suf, enc) if seg)
        return (-len(stem), nonempty, (pro, pre, suf, enc))

    analyses = []
    for pro, pre, stem, suf, enc in sorted(decompositions, key=order):
        for entry in lexicon[stem]:
            analyses.append(
                MorphAnalysis(
                    surface=form, proclitic=pro, prefix=pre,
                    stem=stem, suffix=suf, enclitic=enc, entry=entry,
                )
            )
    return analyses


def _leading_options(form: str, table: tuple[str, ...]) -> list[str]:
    options = [""]
    for affix in table:
        if len(affix) < len(form) and form.startswith(affix):
            options.append(affix)
    return options


def _trailing_options(form: str, table: tuple[str, ...]) -> list[str]:
    options = [""]
    for affix in table:
        if len(affix) < len(form) and form.endswith(affix):
            options.append(affix)
    return options


def analyze_query(db: LinguisticDb, text: str) -> list[tuple[Token, list[MorphAnalysis]]]:
    """Tokenize, drop stopwords, segment each remaining token.

    Tokens with no analysis are retained with an empty list so downstream
    modules can fall back to the normalized surface as a pseudo-lemma.
    Tokens whose normalized form is empty (pure diacritics) are dropped:
    they cannot be segmented, matched or usefully forwarded.
    """
    results = []
    for token in tokenize(text, db.config):
        if not token.normalized or is_stopword(db, token):
            continue
        results.append((token, segment(db, token.normalized)))
    return results


def canonical_term(
    token: Token,
    analyses: list[MorphAnalysis],
    config: NormalizeConfig = DEFAULT_CONFIG,
) -> str:
    """The indexing/matching term for a token: its lemma when exactly one
    distinct lemma survives analysis, otherwise the normalized surface.
    Queries and documents share this rule so morphological variants of one
    base form meet in the index."""
    lemmas: list[str] = []
    for analysis in analyses:
        lemma = normalize_text(analysis.entry.lemma, config)
        if lemma not in lemmas:
            lemmas.append(lemma)
    if len(lemmas) == 1:
        return lemmas[0]
    return token.normalized


def derive_forms(db: LinguisticDb, lemma: str, with_affixes: bool = False) -> list[str]:
    """Surface forms for a known lemma. The default returns the bare
    stem(s) only; with_affixes additionally composes each stem with every
    suffix (no compatibility filtering)."""
    key = normalize_text(lemma, db.config)
    stems = db._stems_by_lemma.get(key)
    if not stems:
        raise KeyError(f"unknown lemma: {lemma!r}")
    forms = list(stems)
    if with_affixes:
        for stem in stems:
            for suffix in db.suffixes:
                candidate = stem + suffix
                if candidate not in forms:
                    forms.append(candidate)
    return forms
