"""Arabic text normalization and whitespace tokenization.

All matching done anywhere in the package (stopword lookup, lexicon keys,
WordNet lemma index, local index terms) goes through :func:`normalize_text`
with a single shared :class:`NormalizeConfig`, so the canonical form is
decided in exactly one place. The original surface is kept on :class:`Token`
so user-facing layers can display what was actually typed.

Each fold is individually toggleable so the evaluation harness can A/B-test
normalization policy; the flags round-trip through a flat key=value file.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path

# Tashkil: tanwin (U+064B-U+064D), short vowels (U+064E-U+0650),
# shadda (U+0651), sukun (U+0652).
DIACRITICS = frozenset(chr(c) for c in range(0x064B, 0x0653))

# Kashida, used only for stretching.
TATWEEL = "ـ"

ALEF_FOLDS = {"أ": "ا", "إ": "ا", "آ": "ا"}  # أ إ آ -> ا
YA_FOLD = {"ى": "ي"}  # ى -> ي
TA_MARBUTA_FOLD = {"ة": "ه"}  # ة -> ه


@dataclass(frozen=True)
class NormalizeConfig:
    """Which normalization rules are applied. Defaults: strip marks and
    fold alef variants, keep final-ya and ta-marbuta distinctions."""

    strip_diacritics: bool = True
    strip_tatweel: bool = True
    fold_alef: bool = True
    fold_ya: bool = False
    fold_ta_marbuta: bool = False

    @classmethod
    def load(cls, path: str | Path) -> "NormalizeConfig":
        """Read a flat key=value file ('#' starts a comment line)."""
        values = {}
        known = {f.name for f in fields(cls)}
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip().lower()
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            if value not in ("true", "false"):
                raise ValueError(f"{path}:{lineno}: value for {key} must be true or false")
            values[key] = value == "true"
        return cls(**values)

    def save(self, path: str | Path) -> None:
        lines = [f"{f.name}={'true' if getattr(self, f.name) else 'false'}" for f in fields(self)]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


DEFAULT_CONFIG = NormalizeConfig()


@lru_cache(maxsize=None)
def _translation_table(config: NormalizeConfig) -> dict[int, str | None]:
    table: dict[int, str | None] = {}
    if config.strip_diacritics:
        table.update({ord(c): None for c in DIACRITICS})
    if config.strip_tatweel:
        table[ord(TATWEEL)] = None
    if config.fold_alef:
        table.update({ord(k): v for k, v in ALEF_FOLDS.items()})
    if config.fold_ya:
        table.update({ord(k): v for k, v in YA_FOLD.items()})
    if config.fold_ta_marbuta:
        table.update({ord(k): v for k, v in TA_MARBUTA_FOLD.items()})
    return table


def normalize_text(text: str, config: NormalizeConfig = DEFAULT_CONFIG) -> str:
    """Return the canonical matching form of ``text``.

    Character-wise strip/fold only, so the function is idempotent and
    non-Arabic characters pass through unchanged.
    """
    return text.translate(_translation_table(config))


@dataclass(frozen=True)
class Token:
    surface: str      # original text slice, edge punctuation removed
    normalized: str   # canonical matching form; may be empty (pure-diacritic surface)
    position: int     # 0-based index within one tokenization


def _strip_edge_punctuation(chunk: str) -> str:
    start, end = 0, len(chunk)
    while start < end and unicodedata.category(chunk[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(chunk[end - 1]).startswith("P"):
        end -= 1
    return chunk[start:end]


def tokenize(text: str, config: NormalizeConfig = DEFAULT_CONFIG) -> list[Token]:
    """Split on whitespace into maximal runs, stripping punctuation from
    token edges (interior punctuation is preserved). Positions are
    0-based, strictly increasing and gap-free."""
    tokens: list[Token] = []
    for chunk in text.split():
        surface = _strip_edge_punctuation(chunk)
        if not surface:
            continue
        tokens.append(Token(surface, normalize_text(surface, config), len(tokens)))
    return tokens
