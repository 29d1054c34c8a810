"""One shared analyze → expand → build pipeline.

The CLI, the HTTP service and the evaluation harness all run queries
through this object, so identical inputs and selections produce identical
serialized queries everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import awn, morph, query as query_mod
from .expand import ExpansionCandidate, ExpansionConfig, expand as run_expansion
from .morph import LinguisticDb, MorphAnalysis
from .normalize import DEFAULT_CONFIG, NormalizeConfig, Token
from .query import ExpandedQuery


@dataclass
class Pipeline:
    lexdb: LinguisticDb
    awn_db: awn.LexicalDb | None = None
    expansion_config: ExpansionConfig | None = None

    @classmethod
    def from_paths(
        cls,
        lexdb_path: str | Path,
        awn_path: str | Path | None = None,
        expansion_config_path: str | Path | None = None,
        norm_config: NormalizeConfig = DEFAULT_CONFIG,
    ) -> "Pipeline":
        return cls(
            lexdb=morph.load_linguistic_db(lexdb_path, norm_config),
            awn_db=awn.load_lexical_db(awn_path, norm_config) if awn_path else None,
            expansion_config=(
                ExpansionConfig.load(expansion_config_path) if expansion_config_path else None
            ),
        )

    @property
    def config(self) -> ExpansionConfig:
        return self.expansion_config or ExpansionConfig()

    def analyze(self, text: str) -> list[tuple[Token, list[MorphAnalysis]]]:
        return morph.analyze_query(self.lexdb, text)

    def expand(
        self,
        analyses: list[tuple[Token, list[MorphAnalysis]]],
        config: ExpansionConfig | None = None,
    ) -> list[tuple[Token, list[ExpansionCandidate]]]:
        if self.awn_db is None:
            raise RuntimeError("no lexical database loaded; expansion is unavailable")
        return run_expansion(self.awn_db, analyses, config or self.config)

    def build_baseline(self, text: str) -> ExpandedQuery:
        """The no-enrichment path: analysis only, no lexical-graph access."""
        return query_mod.build(self.analyze(text), norm_config=self.lexdb.config)

    def build_expanded(
        self,
        text: str,
        config: ExpansionConfig | None = None,
        selections: dict[tuple[int, str], bool] | None = None,
    ) -> ExpandedQuery:
        analyses = self.analyze(text)
        expansion = self.expand(analyses, config)
        return query_mod.build(
            analyses, expansion, selections=selections,
            config=config or self.config, norm_config=self.lexdb.config,
        )
