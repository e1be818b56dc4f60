"""paradigm: two-dimensional text from contextualized embeddings.

For each content word of a sentence, find the closest words (by cosine) in
a corpus-derived static type-embedding store, annotated with frequency
tiers and parts of speech.
"""

from .provider import LayerMode, ReferenceEmbedder, EmbeddingRequest, EmbeddingResponse
from .typestore import Accumulator, TypeEmbeddingStore, finalize, normalize, topk
from .lexicon import FrequencyLexicon, Tier, load_freq_dict, tier, classify_pos, is_functional
from .substitute import QuerySpec, TwoDimensionalText, analyze, render_plain, tokenize
from .history import QueryHistory

__all__ = [
    "LayerMode", "ReferenceEmbedder", "EmbeddingRequest", "EmbeddingResponse",
    "Accumulator", "TypeEmbeddingStore", "finalize", "normalize", "topk",
    "FrequencyLexicon", "Tier", "load_freq_dict", "tier", "classify_pos",
    "is_functional", "QuerySpec", "TwoDimensionalText", "analyze",
    "render_plain", "tokenize", "QueryHistory",
]

__version__ = "0.1.0"
