"""qamar: Arabic query expansion over a morphological analyzer and a
WordNet-style lexical database, with local and external search backends
and an offline evaluation harness."""

from .awn import LexicalDb, Synset, concept_list, load_lexical_db, related, synsets_of
from .expand import ExpansionCandidate, ExpansionConfig, dedupe_and_rank, expand
from .morph import (
    LexiconEntry,
    LinguisticDb,
    MorphAnalysis,
    analyze_query,
    derive_forms,
    is_stopword,
    load_linguistic_db,
    segment,
)
from .normalize import NormalizeConfig, Token, normalize_text, tokenize
from .pipeline import Pipeline
from .query import (
    ExpandedQuery,
    QueryGroup,
    build,
    parse_boolean,
    serialize_boolean,
    serialize_flat,
    serialize_weighted,
)
from .search import (
    Document,
    Index,
    SearchResult,
    WebBackendConfig,
    build_index,
    index_add,
    index_search,
    web_search,
)

__version__ = "0.1.0"
