"""Assemble the enriched query and serialize it per backend.

Groups keep the OR-within-group / AND-across-groups structure so an
expansion term can only satisfy its own source word's slot. A flat
space-joined rendering is also provided for fidelity experiments with
engines that take plain concatenated text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expand import ExpansionCandidate, ExpansionConfig
from .morph import MorphAnalysis, canonical_term
from .normalize import DEFAULT_CONFIG, NormalizeConfig, Token


@dataclass(frozen=True)
class QueryGroup:
    original: Token
    index_term: str                                # matching form for the local index
    candidates: tuple[ExpansionCandidate, ...]     # selected candidates only


@dataclass(frozen=True)
class ExpandedQuery:
    groups: tuple[QueryGroup, ...]
    config_snapshot: ExpansionConfig


def build(
    analyses: list[tuple[Token, list[MorphAnalysis]]],
    expansion: list[tuple[Token, list[ExpansionCandidate]]] | None = None,
    selections: dict[tuple[int, str], bool] | None = None,
    config: ExpansionConfig | None = None,
    norm_config: NormalizeConfig = DEFAULT_CONFIG,
) -> ExpandedQuery:
    """Build the final query from analyses and (optionally) expansion
    output, applying per-candidate selection overrides.

    ``selections`` maps (group index, candidate term) to a selected flag;
    referencing an unknown group or term is an error. With ``expansion``
    omitted the result is the baseline query (no candidates), which is the
    no-enrichment path in the same pipeline.
    """
    if expansion is not None:
        if len(expansion) != len(analyses) or any(
            exp_token is not token for (token, _), (exp_token, _) in zip(analyses, expansion)
        ):
            raise ValueError("expansion output does not correspond to analyses")

    overrides = dict(selections) if selections else {}
    if overrides:
        valid: set[tuple[int, str]] = set()
        if expansion is not None:
            for group_idx, (_, candidates) in enumerate(expansion):
                valid.update((group_idx, c.term) for c in candidates)
        unknown = set(overrides) - valid
        if unknown:
            raise ValueError(f"selection overrides reference unknown candidates: {sorted(unknown)}")

    groups = []
    for group_idx, (token, token_analyses) in enumerate(analyses):
        selected: list[ExpansionCandidate] = []
        if expansion is not None:
            for cand in expansion[group_idx][1]:
                flag = overrides.get((group_idx, cand.term), cand.selected)
                if flag:
                    selected.append(cand)
        groups.append(QueryGroup(
            original=token,
            index_term=canonical_term(token, token_analyses, norm_config),
            candidates=tuple(selected),
        ))
    if config is None:
        config = ExpansionConfig() if expansion is not None else ExpansionConfig(
            relations_enabled=frozenset()
        )
    return ExpandedQuery(groups=tuple(groups), config_snapshot=config)


def _render_term(term: str) -> str:
    return f'"{term}"' if " " in term else term


def serialize_boolean(query: ExpandedQuery) -> str:
    """Render for external engines: each group with candidates becomes
    ``(original OR cand1 OR ...)``, groups joined by spaces (implicit AND),
    multiword candidates double-quoted, weights ignored."""
    parts = []
    for group in query.groups:
        if group.candidates:
            alternatives = [group.original.surface] + [_render_term(c.term) for c in group.candidates]
            parts.append("(" + " OR ".join(alternatives) + ")")
        else:
            parts.append(group.original.surface)
    return " ".join(parts)


def serialize_flat(query: ExpandedQuery) -> str:
    """Plain concatenation: the original terms followed by every selected
    candidate term, space-joined. No grouping, no quoting."""
    originals = [g.original.surface for g in query.groups]
    extras = [c.term for g in query.groups for c in g.candidates]
    return " ".join(originals + extras)


def serialize_weighted(query: ExpandedQuery) -> list[tuple[str, float, int]]:
    """(term, weight, group index) tuples for the local index backend:
    one weight-1.0 tuple per group for the original, candidates at their
    relation weights."""
    tuples = []
    for group_idx, group in enumerate(query.groups):
        tuples.append((group.index_term, 1.0, group_idx))
        tuples.extend((c.term, c.weight, group_idx) for c in group.candidates)
    return tuples


def _lex_boolean(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end == -1:
                raise ValueError(f"unterminated quote at offset {i}")
            tokens.append(("phrase", text[i + 1:end], i))
            i = end + 1
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in '()"':
                i += 1
            tokens.append(("word", text[start:i], start))
    return tokens


def parse_boolean(text: str) -> list[tuple[str, list[str]]]:
    """Recover the group structure from a serialize_boolean rendering:
    a list of (original, candidate terms). Inverse of serialize_boolean
    for queries whose terms contain no quotes or parentheses."""
    tokens = _lex_boolean(text)
    groups: list[tuple[str, list[str]]] = []
    i = 0
    while i < len(tokens):
        kind, value, pos = tokens[i]
        if kind == "word":
            groups.append((value, []))
            i += 1
        elif kind == "(":
            i += 1
            if i >= len(tokens) or tokens[i][0] != "word":
                raise ValueError(f"expected group original after '(' at offset {pos}")
            original = tokens[i][1]
            i += 1
            candidates: list[str] = []
            while i < len(tokens) and tokens[i][0] != ")":
                if tokens[i][:2] != ("word", "OR"):
                    raise ValueError(f"expected OR at offset {tokens[i][2]}")
                i += 1
                if i >= len(tokens) or tokens[i][0] not in ("word", "phrase"):
                    raise ValueError("expected term after OR")
                candidates.append(tokens[i][1])
                i += 1
            if i >= len(tokens):
                raise ValueError(f"unclosed group starting at offset {pos}")
            i += 1
            groups.append((original, candidates))
        else:
            raise ValueError(f"unexpected {value!r} at offset {pos}")
    return groups
