"""Model backends: anything that yields per-layer token vectors.

A backend returns an array of shape (n_layers, n_tokens, dim) for a token
sequence. The layer policy (top = last layer, average = unweighted mean
over all layers, character/input layer included) is applied outside the
backend so every backend gets it identically.
"""

from __future__ import annotations

import hashlib

import numpy as np


class HashBackend:
    """Deterministic multi-layer backend for testing and offline use.

    Each (token, layer) pair seeds a PRNG from a SHA-256 digest, so output
    is stable across processes and platforms. Layers beyond the first mix
    in a share of the previous layer to mimic deepening contextualization.
    """

    def __init__(self, dim: int = 32, n_layers: int = 3):
        if dim < 1 or n_layers < 1:
            raise ValueError("dim and n_layers must be positive")
        self.dim = dim
        self.n_layers = n_layers

    def _token_layer_vector(self, token: str, layer: int) -> np.ndarray:
        digest = hashlib.sha256(f"{layer}\x00{token}".encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "little")
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(self.dim)
        return v / np.linalg.norm(v)

    def layers(self, tokens: list[str]) -> np.ndarray:
        out = np.empty((self.n_layers, len(tokens), self.dim))
        for j, tok in enumerate(tokens):
            prev = None
            for l in range(self.n_layers):
                v = self._token_layer_vector(tok, l)
                if prev is not None:
                    v = v + 0.5 * prev
                    v = v / np.linalg.norm(v)
                out[l, j] = v
                prev = v
        return out


class ElmoBackend:
    """Real ELMo inference via the simple_elmo package (optional extra).

    Loads the weights file and the architecture options file; exposes the
    same (n_layers, n_tokens, dim) contract as HashBackend.
    """

    def __init__(self, weights_path: str, options_path: str, batch_size: int = 32):
        try:
            from simple_elmo import ElmoModel
        except ImportError as e:
            raise RuntimeError(
                "simple_elmo is not installed; install paradigm-bridge[elmo] "
                "or use the hash backend") from e
        self._model = ElmoModel()
        self._model.load(weights_path, options_path, max_batch_size=batch_size)
        self.dim = int(self._model.vector_size)
        self.n_layers = int(getattr(self._model, "n_layers", 3))

    def layers(self, tokens: list[str]) -> np.ndarray:
        # simple_elmo returns (1, n_layers, n_tokens, dim) for layers="all"
        elmo = self._model.get_elmo_vectors([tokens], layers="all")
        return np.asarray(elmo[0])


def apply_layer_policy(layers: np.ndarray, layer_mode: str) -> np.ndarray:
    if layer_mode == "top":
        return layers[-1]
    if layer_mode == "average":
        return layers.mean(axis=0)
    raise ValueError(f"unknown layer mode: {layer_mode!r}")
