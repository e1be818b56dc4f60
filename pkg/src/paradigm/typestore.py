"""Static type-embedding store: build, persist, search.

A store holds one unit-normalized vector per word type, obtained by summing
that word's contextualized token vectors over a corpus and normalizing the
sum. Search is exact brute-force cosine top-k; at the target scale
(~10k words, dim ~1024) that is milliseconds, and the correctness oracle
stays trivial.
"""

from __future__ import annotations

import io
import json
import logging
import math
import struct
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

import numpy as np

from .errors import (
    BadMagic,
    ChecksumMismatch,
    DimensionMismatch,
    EmptyAccumulator,
    EmptyAfterExclusion,
    NonFiniteComponent,
    TruncatedFile,
    UnsupportedVersion,
    ZeroVector,
)
from .provider import LayerMode, fnv1a_64

log = logging.getLogger(__name__)

MAGIC = b"TVS1"
VERSION = 1
_NORM_FLOOR = 1e-12


def normalize(v: np.ndarray) -> np.ndarray:
    """v / ||v||; raises ZeroVector below the 1e-12 norm floor."""
    v = np.asarray(v, dtype=np.float64)
    norm = math.sqrt(float(v @ v))
    if norm < _NORM_FLOOR:
        raise ZeroVector(f"vector norm {norm} below {_NORM_FLOOR}")
    return v / norm


@dataclass(frozen=True)
class Neighbor:
    word: str
    similarity: float
    rank_in_store: int  # 1-based position in the frequency-sorted store


class TypeEmbeddingStore:
    """Immutable frequency-sorted set of unit vectors.

    Entries are ordered by descending frequency, ties broken by ascending
    word; a word's rank is its 1-based position. Vectors are float32 (the
    on-disk precision); similarity math is done in float64.
    """

    def __init__(self, dim: int, layer_mode: LayerMode,
                 words: list[str], frequencies: list[int],
                 vectors: np.ndarray, metadata: Optional[dict] = None):
        order = sorted(range(len(words)), key=lambda i: (-frequencies[i], words[i]))
        self.dim = dim
        self.layer_mode = layer_mode
        self.words = [words[i] for i in order]
        self.frequencies = [int(frequencies[i]) for i in order]
        self.vectors = np.ascontiguousarray(vectors[order], dtype=np.float32)
        self.metadata = dict(metadata or {})
        if len(set(self.words)) != len(self.words):
            raise ValueError("duplicate words in store")
        if self.vectors.shape != (len(self.words), dim):
            raise DimensionMismatch(
                f"vector block {self.vectors.shape} != ({len(self.words)}, {dim})")
        self._index = {w: i for i, w in enumerate(self.words)}
        self._matrix64 = self.vectors.astype(np.float64)

    def __len__(self) -> int:
        return len(self.words)

    def rank(self, word: str) -> Optional[int]:
        i = self._index.get(word)
        return None if i is None else i + 1

    def frequency(self, word: str) -> Optional[int]:
        i = self._index.get(word)
        return None if i is None else self.frequencies[i]

    def vector(self, word: str) -> Optional[np.ndarray]:
        i = self._index.get(word)
        return None if i is None else self.vectors[i]


def topk(store: TypeEmbeddingStore, query: np.ndarray, k: int) -> list[Neighbor]:
    """Exact top-k by cosine similarity, ties broken by ascending store rank."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (store.dim,):
        raise DimensionMismatch(f"query shape {q.shape} != ({store.dim},)")
    q = normalize(q)
    if len(store) == 0:
        return []
    sims = store._matrix64 @ q
    # lexsort: primary key descending similarity, secondary ascending rank
    order = np.lexsort((np.arange(len(sims)), -sims))[:k]
    return [Neighbor(store.words[i], float(sims[i]), i + 1) for i in order]


class Accumulator:
    """Running per-word vector sums and observation counts.

    Supports parallel partial accumulation: partial accumulators merge by
    adding sums and counts (commutative and associative up to float
    reassociation).
    """

    def __init__(self, dim: int, layer_mode: LayerMode = LayerMode.TOP):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.layer_mode = layer_mode
        self.sums: dict[str, np.ndarray] = {}
        self.counts: dict[str, int] = {}

    def accumulate(self, word: str, vector: np.ndarray) -> None:
        v = np.asarray(vector, dtype=np.float64)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"record dim {v.shape} != ({self.dim},)")
        if not np.isfinite(v).all():
            raise NonFiniteComponent(f"non-finite component in record for {word!r}")
        if word in self.sums:
            self.sums[word] = self.sums[word] + v
            self.counts[word] += 1
        else:
            self.sums[word] = v.copy()
            self.counts[word] = 1

    def merge(self, other: "Accumulator") -> None:
        if other.dim != self.dim:
            raise DimensionMismatch("cannot merge accumulators of different dim")
        for word, s in other.sums.items():
            if word in self.sums:
                self.sums[word] = self.sums[word] + s
                self.counts[word] += other.counts[word]
            else:
                self.sums[word] = s.copy()
                self.counts[word] = other.counts[word]

    def __len__(self) -> int:
        return len(self.sums)


def finalize(acc: Accumulator, vocab_limit: int,
             exclusion: Optional[Callable[[str], bool]] = None,
             metadata: Optional[dict] = None,
             stats_out: Optional[dict] = None) -> TypeEmbeddingStore:
    """Apply the vocabulary policy and freeze the accumulator into a store.

    Excluded words are dropped first, then the vocab_limit most frequent of
    the rest are kept (count ties broken by ascending word). Words whose sum
    cannot be normalized are dropped with a warning, not an error: a corpus
    artifact must not abort a long build.
    """
    if len(acc) == 0:
        raise EmptyAccumulator("nothing accumulated")
    if vocab_limit < 1:
        raise ValueError("vocab_limit must be positive")
    exclusion = exclusion or (lambda w: False)

    eligible = [w for w in acc.sums if not exclusion(w)]
    excluded = len(acc) - len(eligible)
    if not eligible:
        raise EmptyAfterExclusion("every accumulated word was excluded")
    eligible.sort(key=lambda w: (-acc.counts[w], w))
    kept = eligible[:vocab_limit]

    words, freqs, rows = [], [], []
    dropped_zero = 0
    for w in kept:
        try:
            rows.append(normalize(acc.sums[w]))
        except ZeroVector:
            dropped_zero += 1
            log.warning("dropping %r: summed vector has near-zero norm", w)
            continue
        words.append(w)
        freqs.append(acc.counts[w])

    if stats_out is not None:
        stats_out.update(
            types_seen=len(acc),
            excluded=excluded,
            kept=len(words),
            dropped_zero_norm=dropped_zero,
            dropped_over_limit=len(eligible) - len(kept),
        )
    matrix = np.stack(rows) if rows else np.zeros((0, acc.dim), dtype=np.float64)
    return TypeEmbeddingStore(acc.dim, acc.layer_mode, words, freqs,
                              matrix.astype(np.float32), metadata)


# --- build input stream -------------------------------------------------------

def iter_records(lines: Iterable[str]) -> Iterator[tuple[str, list[float]]]:
    """Parse the JSONL token-embedding stream: {"word": ..., "vec": [...]}.

    Lines starting with '#' and blank lines are skipped.
    """
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        doc = json.loads(line)
        yield doc["word"], doc["vec"]


# --- binary persistence (.tvs) -------------------------------------------------

def save(store: TypeEmbeddingStore, path: str) -> int:
    """Write the store in the .tvs format; returns the byte count written."""
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<IIQ", VERSION, store.dim, len(store)))
    buf.write(struct.pack("<B", 0 if store.layer_mode is LayerMode.TOP else 1))
    meta = json.dumps(store.metadata, ensure_ascii=False, sort_keys=True).encode("utf-8")
    buf.write(struct.pack("<I", len(meta)))
    buf.write(meta)
    for word, freq, vec in zip(store.words, store.frequencies, store.vectors):
        wb = word.encode("utf-8")
        buf.write(struct.pack("<H", len(wb)))
        buf.write(wb)
        buf.write(struct.pack("<Q", freq))
        buf.write(vec.astype("<f4").tobytes())
    body = buf.getvalue()
    blob = body + struct.pack("<Q", fnv1a_64(body))
    with open(path, "wb") as f:
        f.write(blob)
    return len(blob)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedFile(f"needed {n} bytes at offset {self.pos}")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load(path: str) -> TypeEmbeddingStore:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < len(MAGIC) + 8:
        raise TruncatedFile("file shorter than header")
    body, (checksum,) = data[:-8], struct.unpack("<Q", data[-8:])
    if body[:4] != MAGIC:
        raise BadMagic(f"bad magic {body[:4]!r}")
    if fnv1a_64(body) != checksum:
        raise ChecksumMismatch("stored checksum does not match file contents")
    r = _Reader(body)
    r.take(4)
    version, dim, count = r.unpack("<IIQ")
    if version != VERSION:
        raise UnsupportedVersion(f"version {version}")
    (mode_byte,) = r.unpack("<B")
    if mode_byte not in (0, 1):
        raise UnsupportedVersion(f"unknown layer mode byte {mode_byte}")
    layer_mode = LayerMode.TOP if mode_byte == 0 else LayerMode.AVERAGE
    (meta_len,) = r.unpack("<I")
    try:
        metadata = json.loads(r.take(meta_len).decode("utf-8")) if meta_len else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise TruncatedFile(f"unreadable metadata block: {e}") from e

    words, freqs, rows = [], [], []
    for _ in range(count):
        (wlen,) = r.unpack("<H")
        word = r.take(wlen).decode("utf-8")
        (freq,) = r.unpack("<Q")
        vec = np.frombuffer(r.take(4 * dim), dtype="<f4")
        words.append(word)
        freqs.append(freq)
        rows.append(vec)
    if r.pos != len(body):
        raise TruncatedFile(f"{len(body) - r.pos} trailing bytes after last entry")
    matrix = np.stack(rows) if rows else np.zeros((0, dim), dtype=np.float32)
    return TypeEmbeddingStore(dim, layer_mode, words, freqs, matrix, metadata)
