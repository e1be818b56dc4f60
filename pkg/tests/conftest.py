import numpy as np
import pytest

from paradigm.lexicon import FrequencyLexicon
from paradigm.provider import EmbeddingRequest, LayerMode, ReferenceEmbedder
from paradigm.typestore import Accumulator, TypeEmbeddingStore, finalize

DIM = 16

CONTENT_WORDS = [
    "cat", "dog", "tree", "house", "river", "mountain", "walks", "sings",
    "blue", "green", "table", "cloud", "stone", "bird", "fish", "garden",
    "road", "window", "music", "light",
]


def build_reference_store(words=None, dim=DIM, mode=LayerMode.TOP,
                          repeats=3, metadata=None) -> TypeEmbeddingStore:
    """Store where each word's type vector is its single-token embedding.

    Every word is observed `repeats` times as a one-token sentence, so the
    normalized sum equals the context-free embedding exactly.
    """
    emb = ReferenceEmbedder(dim)
    acc = Accumulator(dim, mode)
    for w in words or CONTENT_WORDS:
        vec = emb.embed_tokens(EmbeddingRequest((w,), mode)).vectors[0]
        for _ in range(repeats):
            acc.accumulate(w, vec)
    return finalize(acc, 10000, metadata=metadata)


@pytest.fixture
def reference_store():
    return build_reference_store()

@pytest.fixture
def reference_embedder():
    return ReferenceEmbedder(DIM)


@pytest.fixture
def flat_lexicon(reference_store):
    return FrequencyLexicon.from_counts(
        dict(zip(reference_store.words, reference_store.frequencies)))


def brute_force_topk(words, matrix, query, k):
    """Independent oracle: full cosine sort, ties by store order."""
    q = np.asarray(query, dtype=np.float64)
    q = q / np.linalg.norm(q)
    sims = []
    for i, row in enumerate(np.asarray(matrix, dtype=np.float64)):
        sims.append((float(row @ q) / float(np.linalg.norm(row)), i))
    ranked = sorted(sims, key=lambda t: (-t[0], t[1]))[:k]
    return [(words[i], s) for s, i in ranked]
