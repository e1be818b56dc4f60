"""Frequency dictionary, tiering, and the rule-based POS fallback."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Optional, Sequence

from .errors import (
    FileUnreadable,
    NotUtf8,
    TagCountMismatch,
    TooManyMalformedLines,
)

log = logging.getLogger(__name__)

UPOS_LABELS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})

# Closed-class tags plus PUNCT/NUM/SYM: these self-substitute and are
# excluded from the substitute vocabulary.
FUNCTIONAL_TAGS = frozenset({
    "ADP", "AUX", "CCONJ", "SCONJ", "DET", "PART", "PRON",
    "PUNCT", "NUM", "SYM",
})

DEFAULT_HIGH_MAX_RANK = 3000
DEFAULT_MID_MAX_RANK = 20000


class Tier(Enum):
    HIGH = "high"
    MID = "mid"
    LOW = "low"


def is_functional(tag: str) -> bool:
    return tag in FUNCTIONAL_TAGS


@dataclass(frozen=True)
class FrequencyLexicon:
    """word -> (frequency, rank), ranks 1..N by descending frequency."""

    entries: dict[str, tuple[int, int]]
    total_tokens: int
    high_max_rank: int = DEFAULT_HIGH_MAX_RANK
    mid_max_rank: int = DEFAULT_MID_MAX_RANK

    def __post_init__(self):
        if self.high_max_rank >= self.mid_max_rank:
            raise ValueError("high_max_rank must be below mid_max_rank")

    @classmethod
    def from_counts(cls, counts: dict[str, int],
                    high_max_rank: int = DEFAULT_HIGH_MAX_RANK,
                    mid_max_rank: int = DEFAULT_MID_MAX_RANK) -> "FrequencyLexicon":
        ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        entries = {w: (f, i + 1) for i, (w, f) in enumerate(ordered)}
        return cls(entries, sum(counts.values()), high_max_rank, mid_max_rank)

    def rank(self, word: str) -> Optional[int]:
        hit = self.entries.get(word)
        return None if hit is None else hit[1]

    def frequency(self, word: str) -> Optional[int]:
        hit = self.entries.get(word)
        return None if hit is None else hit[0]


def tier(lex: FrequencyLexicon, word: str) -> Tier:
    """Frequency tier by rank; words missing from the lexicon count as rare."""
    rank = lex.rank(word)
    if rank is None or rank > lex.mid_max_rank:
        return Tier.LOW
    if rank <= lex.high_max_rank:
        return Tier.HIGH
    return Tier.MID


def tier_for_rank(lex: FrequencyLexicon, rank: Optional[int]) -> Tier:
    if rank is None or rank > lex.mid_max_rank:
        return Tier.LOW
    return Tier.HIGH if rank <= lex.high_max_rank else Tier.MID


def load_freq_dict(path: str,
                   high_max_rank: int = DEFAULT_HIGH_MAX_RANK,
                   mid_max_rank: int = DEFAULT_MID_MAX_RANK) -> FrequencyLexicon:
    """Load a tab-separated "word<TAB>frequency[<TAB>pos]" dictionary.

    Duplicate words are summed (sharded dictionaries are common). Malformed
    lines are skipped and counted; more than 1% malformed is an error.
    """
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise FileUnreadable(f"cannot read {path}: {e}") from e
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise NotUtf8(f"{path} is not UTF-8: {e}") from e

    counts: dict[str, int] = {}
    considered = 0
    malformed = 0
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        considered += 1
        fields = line.split("\t")
        if len(fields) < 2 or not fields[0]:
            malformed += 1
            continue
        try:
            freq = int(fields[1])
        except ValueError:
            malformed += 1
            continue
        if freq < 0:
            malformed += 1
            continue
        counts[fields[0]] = counts.get(fields[0], 0) + freq
    if malformed:
        log.warning("%s: skipped %d malformed of %d lines", path, malformed, considered)
    if considered and malformed / considered > 0.01:
        raise TooManyMalformedLines(
            f"{malformed} of {considered} lines malformed in {path}")
    return FrequencyLexicon.from_counts(counts, high_max_rank, mid_max_rank)


# --- rule-based POS fallback ----------------------------------------------------

def load_closed_class(language: str = "en") -> dict[str, str]:
    """Bundled closed-class word list for a language; empty if none shipped."""
    name = f"closed_class_{language}.tsv"
    try:
        text = resources.files("paradigm.data").joinpath(name).read_text("utf-8")
    except FileNotFoundError:
        log.debug("no closed-class list for language %r", language)
        return {}
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        word, tag = line.split("\t")
        table[word] = tag
    return table


def classify_pos(tokens: Sequence[str],
                 provider_tags: Optional[Sequence[str]] = None,
                 closed_class: Optional[dict[str, str]] = None) -> list[str]:
    """Tag tokens: provider tags pass through verbatim when present.

    Fallback rules, in order: all-punctuation -> PUNCT, contains a decimal
    digit -> NUM, closed-class list hit -> its tag, anything else -> NOUN
    (content-word treatment is the informative failure mode).
    """
    if provider_tags is not None:
        if len(provider_tags) != len(tokens):
            raise TagCountMismatch(
                f"{len(provider_tags)} tags for {len(tokens)} tokens")
        return list(provider_tags)
    if closed_class is None:
        closed_class = load_closed_class("en")
    tags = []
    for token in tokens:
        low = token.lower()
        if all(not ch.isalnum() for ch in token):
            tags.append("PUNCT")
        elif any(ch.isdigit() for ch in token):
            tags.append("NUM")
        elif low in closed_class:
            tags.append(closed_class[low])
        else:
            tags.append("NOUN")
    return tags


def exclusion_predicate(language: str = "en"):
    """The vocabulary-policy predicate: functional fallback tag or any digit."""
    closed_class = load_closed_class(language)

    def excluded(word: str) -> bool:
        if any(ch.isdigit() for ch in word):
            return True
        tag = classify_pos([word], closed_class=closed_class)[0]
        return is_functional(tag)

    return excluded
