"""Corpus export: one JSONL token-embedding record per token occurrence.

The output feeds the engine's build-store command. Input is UTF-8 plain
text, one sentence per line; tokens are whitespace-split and lowercased
(the engine lowercases queries before lookup, so the store should be
lowercase too).
"""

from __future__ import annotations

import json
import logging
from typing import TextIO

import numpy as np

from .backends import apply_layer_policy

log = logging.getLogger(__name__)


def export_corpus_stream(backend, corpus: TextIO, out: TextIO,
                         layer_mode: str = "top") -> tuple[int, int]:
    """Returns (records written, lines skipped)."""
    written = 0
    skipped = 0
    for line in corpus:
        tokens = [t.lower() for t in line.split()]
        if not tokens:
            continue
        try:
            vectors = apply_layer_policy(backend.layers(tokens), layer_mode)
        except Exception as e:
            skipped += 1
            log.warning("skipping line (%s): %.60s", e, line)
            continue
        for tok, vec in zip(tokens, np.asarray(vectors)):
            out.write(json.dumps({"word": tok, "vec": vec.tolist()},
                                 ensure_ascii=False) + "\n")
            written += 1
    return written, skipped
