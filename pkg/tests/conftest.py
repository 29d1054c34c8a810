from pathlib import Path

import pytest

from qamar.awn import load_lexical_db
from qamar.morph import LexiconEntry, LinguisticDb, load_linguistic_db
from qamar.pipeline import Pipeline
from qamar.search import load_corpus_tsv

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def make_entry(stem: str, lemma: str | None = None, pos: str = "noun", root: str | None = None):
    return LexiconEntry(stem=stem, lemma=lemma or stem, root=root or stem, pos=pos)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def lexdb():
    return load_linguistic_db(FIXTURES / "lexdb")


@pytest.fixture(scope="session")
def concept_table_db():
    return load_lexical_db(FIXTURES / "awn" / "table1_fixture.tsv")


@pytest.fixture(scope="session")
def demo_db():
    return load_lexical_db(FIXTURES / "awn" / "awn_demo.tsv")


@pytest.fixture(scope="session")
def corpus():
    return load_corpus_tsv(FIXTURES / "corpus.tsv")


@pytest.fixture(scope="session")
def pipeline(lexdb, demo_db):
    return Pipeline(lexdb, demo_db)


@pytest.fixture()
def school_db():
    """The clitic/affix tables and lexicon used in the worked segmentation
    example: و/ب/ل proclitics, ال prefix, ة/ات suffixes, ها enclitic,
    stems درس and مدرس."""
    return LinguisticDb(
        stopwords={"و"},
        proclitics=["و", "ب", "ل"],
        prefixes=["ال"],
        suffixes=["ة", "ات"],
        enclitics=["ها"],
        lexicon={
            "درس": [make_entry("درس", pos="verb"), make_entry("درس", pos="noun")],
            "مدرس": [make_entry("مدرس", lemma="مدرسة")],
        },
    )


@pytest.fixture()
def toy_db():
    """Latin-alphabet toy database with overlapping affixes and stems,
    used for oracle-equivalence checks."""
    return LinguisticDb(
        stopwords=set(),
        proclitics=["a", "da"],
        prefixes=["b", "ab"],
        suffixes=["c", "bc"],
        enclitics=["d", "cd"],
        lexicon={
            "bc": [make_entry("bc")],
            "abc": [make_entry("abc")],
            "cab": [make_entry("cab")],
            "f": [make_entry("f"), make_entry("f", lemma="f2", pos="verb")],
            "e": [make_entry("e")],
        },
    )
