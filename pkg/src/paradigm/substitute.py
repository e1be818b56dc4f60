"""The query engine: sentence in, two-dimensional text out.

The horizontal axis is the sentence itself; the vertical axis under each
content word holds its ranked in-context lexical substitutes. Functional
words (determiners, pronouns, punctuation, ...) substitute only themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from . import lexicon as lx
from .errors import DimensionMismatch, EmptySentence, LayerModeMismatch, TooManyTokens
from .lexicon import FrequencyLexicon, Tier
from .provider import EmbeddingProvider, EmbeddingRequest, LayerMode, MAX_TOKENS
from .typestore import TypeEmbeddingStore, topk

DEFAULT_N = 5
MAX_N = 50


@dataclass(frozen=True)
class QuerySpec:
    sentence: str
    model_id: str = ""
    layer_mode: LayerMode = LayerMode.TOP
    n: int = DEFAULT_N
    exclude_self: bool = False

    def __post_init__(self):
        if not self.sentence.strip():
            raise EmptySentence("sentence is empty")
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"n must be in 1..{MAX_N}")


@dataclass(frozen=True)
class Substitute:
    word: str
    similarity: float
    tier: Tier


@dataclass(frozen=True)
class TokenAnalysis:
    surface: str
    position: int
    pos: str
    functional: bool
    tier: Tier
    substitutes: tuple[Substitute, ...]


@dataclass(frozen=True)
class TwoDimensionalText:
    query: QuerySpec
    tokens: tuple[TokenAnalysis, ...]
    store_layer_mode: LayerMode
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


def tokenize(sentence: str) -> list[str]:
    """Unicode-aware split preserving surface forms.

    Maximal runs of letters/digits form word tokens; an apostrophe or hyphen
    joins a token only when flanked by letters/digits on both sides. Every
    other non-whitespace character becomes its own token.
    """
    if not sentence.strip():
        raise EmptySentence("nothing to tokenize")
    tokens: list[str] = []
    current: list[str] = []

    def flush():
        if current:
            tokens.append("".join(current))
            current.clear()

    n = len(sentence)
    for i, ch in enumerate(sentence):
        if ch.isalnum():
            current.append(ch)
        elif ch in "'-" and current and i + 1 < n and sentence[i + 1].isalnum():
            current.append(ch)
        else:
            flush()
            if not ch.isspace():
                tokens.append(ch)
    flush()
    if len(tokens) > MAX_TOKENS:
        raise TooManyTokens(f"{len(tokens)} tokens exceeds the {MAX_TOKENS} limit")
    return tokens


def analyze(query: QuerySpec, store: TypeEmbeddingStore,
            lex: FrequencyLexicon, provider: EmbeddingProvider,
            closed_class: Optional[dict[str, str]] = None) -> TwoDimensionalText:
    """Run the full substitution pipeline for one sentence.

    Tokens are lowercased before embedding and every lexicon/store lookup;
    surface forms are kept for display. The store and the query must agree
    on layer mode, and the provider must match the store dimension.
    """
    if store.layer_mode is not query.layer_mode:
        raise LayerModeMismatch(
            f"query wants {query.layer_mode.value}, store holds {store.layer_mode.value}")
    if provider.dim != store.dim:
        raise DimensionMismatch(
            f"provider dim {provider.dim} != store dim {store.dim}")

    tokens = tokenize(query.sentence)
    lowered = [t.lower() for t in tokens]
    response = provider.embed_tokens(
        EmbeddingRequest(tuple(lowered), query.layer_mode))
    tags = lx.classify_pos(tokens, response.pos_tags, closed_class=closed_class)

    analyses = []
    for i, (surface, low, tag) in enumerate(zip(tokens, lowered, tags)):
        token_tier = lx.tier(lex, low)
        if lx.is_functional(tag):
            subs = (Substitute(surface, 1.0, token_tier),)
        else:
            want = query.n + 1 if query.exclude_self else query.n
            neighbors = topk(store, response.vectors[i], want)
            if query.exclude_self:
                neighbors = [nb for nb in neighbors if nb.word != low][:query.n]
            subs = tuple(
                Substitute(nb.word, nb.similarity, lx.tier(lex, nb.word))
                for nb in neighbors)
        analyses.append(TokenAnalysis(
            surface=surface, position=i, pos=tag,
            functional=lx.is_functional(tag), tier=token_tier,
            substitutes=subs))
    return TwoDimensionalText(
        query=query, tokens=tuple(analyses), store_layer_mode=store.layer_mode)


def render_plain(result: TwoDimensionalText) -> str:
    """Fixed-width grid: sentence on row 0, substitutes stacked below.

    Columns are padded to their widest entry plus two separator spaces;
    functional tokens appear once more on row 1 and then leave their column
    blank. Trailing spaces are trimmed per line.
    """
    columns = []
    for tok in result.tokens:
        col = [tok.surface] + [s.word for s in tok.substitutes]
        columns.append(col)
    depth = max(len(c) for c in columns)
    widths = [max(len(cell) for cell in col) for col in columns]
    lines = []
    for row in range(depth):
        cells = []
        for col, width in zip(columns, widths):
            cell = col[row] if row < len(col) else ""
            cells.append(cell.ljust(width))
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def to_payload(result: TwoDimensionalText) -> dict:
    """The JSON projection shared by the CLI and the HTTP service."""
    return {
        "model": result.query.model_id,
        "layer_mode": result.query.layer_mode.value,
        "n": result.query.n,
        "tokens": [
            {
                "surface": tok.surface,
                "pos": tok.pos,
                "functional": tok.functional,
                "tier": tok.tier.value,
                "substitutes": [
                    {"word": s.word, "similarity": s.similarity, "tier": s.tier.value}
                    for s in tok.substitutes
                ],
            }
            for tok in result.tokens
        ],
    }
