"""Embedding providers.

The engine never loads neural weights itself: token vectors come in through
the provider contract defined here. Three implementations exist:

* ReferenceEmbedder -- fully deterministic, hash-seeded, in-process.
* StdioBridgeProvider -- talks newline-delimited JSON to a child process.
* HttpBridgeProvider -- same wire format, one request line per HTTP POST.
"""

from __future__ import annotations

import json
import math
import subprocess
import threading
import time
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Protocol

import numpy as np

from .errors import (
    EmptyToken,
    EmptyTokenList,
    ProviderUnavailable,
    TokenTooLong,
    TooManyTokens,
)

MAX_TOKENS = 512
MAX_TOKEN_BYTES = 256


class LayerMode(Enum):
    TOP = "top"
    AVERAGE = "average"

    @classmethod
    def parse(cls, label: str) -> "LayerMode":
        for mode in cls:
            if mode.value == label:
                return mode
        raise ValueError(f"unknown layer mode: {label!r}")


@dataclass(frozen=True)
class EmbeddingRequest:
    tokens: tuple[str, ...]
    layer_mode: LayerMode

    def __post_init__(self):
        if len(self.tokens) == 0:
            raise EmptyTokenList("request must contain at least one token")
        if len(self.tokens) > MAX_TOKENS:
            raise TooManyTokens(f"too many tokens: {len(self.tokens)} > {MAX_TOKENS}")
        for t in self.tokens:
            if not t:
                raise EmptyToken("empty token in request")
            if "\n" in t or "\t" in t or "\r" in t:
                raise ValueError(f"token contains line break or tab: {t!r}")
            if len(t.encode("utf-8")) > MAX_TOKEN_BYTES:
                raise TokenTooLong(f"token exceeds {MAX_TOKEN_BYTES} bytes")


@dataclass(frozen=True)
class EmbeddingResponse:
    dim: int
    vectors: np.ndarray  # shape (n_tokens, dim), float64
    pos_tags: Optional[tuple[str, ...]] = None


class EmbeddingProvider(Protocol):
    """Anything that can turn a token sequence into per-token vectors."""

    dim: int

    def embed_tokens(self, request: EmbeddingRequest) -> EmbeddingResponse: ...


# --- deterministic reference embedder ---------------------------------------

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _U64
    return h


def _splitmix64(seed: int, count: int) -> list[int]:
    out = []
    state = seed & _U64
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _U64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
        z = z ^ (z >> 31)
        out.append(z)
    return out


def reference_base_vector(token: str, dim: int) -> np.ndarray:
    """Deterministic context-free vector for a token.

    Pipeline: NFC-normalize + lowercase, FNV-1a 64 hash of the UTF-8 bytes as
    the PRNG seed, dim splitmix64 draws mapped into [-1, 1), unit-normalize.
    """
    if not token:
        raise EmptyToken("cannot embed an empty token")
    normalized = unicodedata.normalize("NFC", token).lower()
    seed = fnv1a_64(normalized.encode("utf-8"))
    raw = _splitmix64(seed, dim)
    vec = np.array([2.0 * (u / 2.0**64) - 1.0 for u in raw], dtype=np.float64)
    norm = math.sqrt(float(vec @ vec))
    return vec / norm


class ReferenceEmbedder:
    """Hash-seeded embedder with a two-layer contextualization scheme.

    Layer 0 is the token's base vector; layer 1 mixes in half of each
    neighbor's base vector and re-normalizes. Top mode returns layer 1,
    Average mode the normalized mean of both layers. Bit-identical output
    for identical requests.
    """

    def __init__(self, dim: int = 64):
        if dim < 1:
            raise ValueError("dim must be positive")
        self.dim = dim

    def embed_tokens(self, request: EmbeddingRequest) -> EmbeddingResponse:
        bases = [reference_base_vector(t, self.dim) for t in request.tokens]
        zero = np.zeros(self.dim, dtype=np.float64)
        out = []
        for i, base in enumerate(bases):
            left = bases[i - 1] if i > 0 else zero
            right = bases[i + 1] if i + 1 < len(bases) else zero
            mixed = base + 0.5 * left + 0.5 * right
            layer1 = mixed / math.sqrt(float(mixed @ mixed))
            if request.layer_mode is LayerMode.TOP:
                out.append(layer1)
            else:
                avg = (base + layer1) / 2.0
                out.append(avg / math.sqrt(float(avg @ avg)))
        return EmbeddingResponse(dim=self.dim, vectors=np.stack(out))


# --- bridge wire protocol -----------------------------------------------------

def encode_request(req_id: int, request: EmbeddingRequest) -> str:
    return json.dumps(
        {
            "id": req_id,
            "op": "embed",
            "tokens": list(request.tokens),
            "layer_mode": request.layer_mode.value,
        },
        ensure_ascii=False,
    )


def decode_response(line: str, expected_tokens: int) -> EmbeddingResponse:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProviderUnavailable(f"bridge sent invalid JSON: {e}") from e
    if "error" in doc:
        raise ProviderUnavailable(f"bridge error: {doc['error']}")
    vectors = np.asarray(doc["vectors"], dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] != expected_tokens:
        raise ProviderUnavailable("bridge returned wrong vector count")
    if not np.isfinite(vectors).all():
        raise ProviderUnavailable("bridge returned non-finite components")
    pos = tuple(doc["pos"]) if doc.get("pos") else None
    return EmbeddingResponse(dim=int(doc["dim"]), vectors=vectors, pos_tags=pos)


class StdioBridgeProvider:
    """Supervised child process speaking NDJSON over stdin/stdout.

    The child is restarted on failure with exponential backoff (base 1s,
    capped at 30s). Requests are serialized internally; responses may come
    back out of order and are matched by id.
    """

    def __init__(self, command: str, dim: int,
                 backoff_base: float = 1.0, backoff_cap: float = 30.0):
        self.command = command
        self.dim = dim
        self._backoff_base = backoff_base
        self._backoff_cap = backoff_cap
        self._failures = 0
        self._lock = threading.Lock()
        self._proc: Optional[subprocess.Popen] = None
        self._next_id = 0
        self._pending: dict[int, str] = {}

    def _ensure_process(self):
        if self._proc is not None and self._proc.poll() is None:
            return
        if self._failures > 0:
            delay = min(self._backoff_base * 2 ** (self._failures - 1), self._backoff_cap)
            time.sleep(delay)
        self._proc = subprocess.Popen(
            self.command, shell=True,
            stdin=subprocess.PIPE, stdout=subprocess.PIPE,
            text=True, encoding="utf-8", bufsize=1,
        )

    def embed_tokens(self, request: EmbeddingRequest) -> EmbeddingResponse:
        with self._lock:
            self._ensure_process()
            req_id = self._next_id
            self._next_id += 1
            try:
                line = self._roundtrip(req_id, request)
            except (BrokenPipeError, OSError, ProviderUnavailable):
                self._failures += 1
                if self._proc is not None:
                    self._proc.kill()
                    self._proc = None
                raise ProviderUnavailable(f"bridge process failed: {self.command}")
            self._failures = 0
        return decode_response(line, len(request.tokens))

    def _roundtrip(self, req_id: int, request: EmbeddingRequest) -> str:
        assert self._proc is not None and self._proc.stdin and self._proc.stdout
        self._proc.stdin.write(encode_request(req_id, request) + "\n")
        self._proc.stdin.flush()
        # responses may arrive out of order; stash strays until ours shows up
        while req_id not in self._pending:
            reply = self._proc.stdout.readline()
            if not reply:
                raise ProviderUnavailable("bridge closed its stdout")
            try:
                rid = json.loads(reply).get("id")
            except json.JSONDecodeError:
                raise ProviderUnavailable("bridge sent a non-JSON line")
            if rid is not None:
                self._pending[int(rid)] = reply
        return self._pending.pop(req_id)

    def close(self):
        with self._lock:
            if self._proc is not None:
                self._proc.kill()
                self._proc = None


class HttpBridgeProvider:
    """One wire-protocol request line per HTTP POST body."""

    def __init__(self, address: str, dim: int, timeout: float = 30.0,
                 transport=None):
        import httpx

        self.address = address
        self.dim = dim
        self._client = httpx.Client(timeout=timeout, transport=transport)
        self._lock = threading.Lock()
        self._next_id = 0

    def embed_tokens(self, request: EmbeddingRequest) -> EmbeddingResponse:
        with self._lock:
            req_id = self._next_id
            self._next_id += 1
        try:
            resp = self._client.post(
                self.address,
                content=(encode_request(req_id, request) + "\n").encode("utf-8"),
                headers={"content-type": "application/x-ndjson"},
            )
            resp.raise_for_status()
        except Exception as e:
            raise ProviderUnavailable(f"bridge HTTP transport failed: {e}") from e
        return decode_response(resp.text.strip(), len(request.tokens))

    def close(self):
        self._client.close()
