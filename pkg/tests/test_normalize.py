import pytest
from hypothesis import given, strategies as st

from qamar.normalize import (
    DEFAULT_CONFIG,
    DIACRITICS,
    NormalizeConfig,
    normalize_text,
    tokenize,
)

# Arabic letters, diacritics, tatweel, foldable characters, ASCII and
# punctuation, to exercise every rule.
arabic_chars = st.sampled_from(
    [chr(c) for c in range(0x0621, 0x064B)]
    + sorted(DIACRITICS)
    + list("أإآىةـ")
    + list("abz !,؟،.")
)
arabic_text = st.text(alphabet=arabic_chars, max_size=30)
any_config = st.builds(
    NormalizeConfig,
    strip_diacritics=st.booleans(),
    strip_tatweel=st.booleans(),
    fold_alef=st.booleans(),
    fold_ya=st.booleans(),
    fold_ta_marbuta=st.booleans(),
)


def test_strips_vocalization():
    assert normalize_text("دَرَسَ") == "درس"


def test_already_canonical_is_unchanged():
    assert normalize_text("درس") == "درس"


def test_alef_variants_fold():
    # Character-by-character application of the fold table.
    folds = {"أ": "ا", "إ": "ا", "آ": "ا"}
    word = "أستاذ"
    expected = "".join(folds.get(ch, ch) for ch in word)
    assert normalize_text(word) == expected == "استاذ"


def test_tatweel_removed():
    assert normalize_text("دـرس") == "درس"


def test_default_flags_keep_ya_and_ta_marbuta():
    assert normalize_text("مدرسة") == "مدرسة"
    assert normalize_text("مستشفى") == "مستشفى"


def test_optional_folds():
    config = NormalizeConfig(fold_ya=True, fold_ta_marbuta=True)
    assert normalize_text("مدرسة", config) == "مدرسه"
    assert normalize_text("مستشفى", config) == "مستشفي"


def test_non_arabic_passes_through():
    assert normalize_text("hello, world!") == "hello, world!"


@given(arabic_text, any_config)
def test_idempotent_under_every_config(text, config):
    once = normalize_text(text, config)
    assert normalize_text(once, config) == once


def test_config_file_round_trip(tmp_path):
    config = NormalizeConfig(fold_ya=True, strip_tatweel=False)
    path = tmp_path / "norm.conf"
    config.save(path)
    assert NormalizeConfig.load(path) == config


def test_config_load_rejects_unknown_key(tmp_path):
    path = tmp_path / "norm.conf"
    path.write_text("fold_everything=true\n", encoding="utf-8")
    with pytest.raises(ValueError, match="unknown key"):
        NormalizeConfig.load(path)


def test_config_load_rejects_non_boolean(tmp_path):
    path = tmp_path / "norm.conf"
    path.write_text("fold_alef=yes\n", encoding="utf-8")
    with pytest.raises(ValueError, match="true or false"):
        NormalizeConfig.load(path)


def test_tokenize_splits_on_whitespace():
    tokens = tokenize("خيل و فرس")
    assert [t.surface for t in tokens] == ["خيل", "و", "فرس"]
    assert [t.position for t in tokens] == [0, 1, 2]


def test_tokenize_empty_input():
    assert tokenize("") == []
    assert tokenize("   \t\n ") == []


def test_tokenize_trims_whitespace():
    tokens = tokenize("  درس  ")
    assert len(tokens) == 1
    assert tokens[0].surface == "درس"
    assert tokens[0].position == 0


def test_tokenize_strips_edge_punctuation_only():
    tokens = tokenize("«درس»، ما-بعد")
    assert [t.surface for t in tokens] == ["درس", "ما-بعد"]


def test_tokenize_drops_pure_punctuation_chunks():
    assert [t.surface for t in tokenize("درس ... فرس")] == ["درس", "فرس"]


def test_pure_diacritic_token_keeps_surface_empty_normalized():
    tokens = tokenize("ًٌ")
    assert len(tokens) == 1
    assert tokens[0].surface == "ًٌ"
    assert tokens[0].normalized == ""


@given(arabic_text)
def test_positions_are_gap_free(text):
    tokens = tokenize(text)
    assert [t.position for t in tokens] == list(range(len(tokens)))


@given(arabic_text)
def test_no_token_contains_whitespace(text):
    for token in tokenize(text):
        assert not any(ch.isspace() for ch in token.surface)


@given(arabic_text)
def test_rejoin_retokenizes_to_same_surfaces(text):
    surfaces = [t.surface for t in tokenize(text)]
    assert [t.surface for t in tokenize(" ".join(surfaces))] == surfaces
