"""Bridge CLI: serve the provider protocol or export corpus streams."""

from __future__ import annotations

import argparse
import sys

from .backends import ElmoBackend, HashBackend
from .export import export_corpus_stream
from .protocol import serve_http, serve_stdio


def rule_tagger(tokens):
    """Minimal tagger for offline runs: punctuation, digits, else NOUN."""
    tags = []
    for tok in tokens:
        if all(not ch.isalnum() for ch in tok):
            tags.append("PUNCT")
        elif any(ch.isdigit() for ch in tok):
            tags.append("NUM")
        else:
            tags.append("NOUN")
    return tags


def make_backend(args):
    if args.backend == "hash":
        return HashBackend(dim=args.dim, n_layers=args.layers)
    if not args.weights or not args.options:
        raise SystemExit("elmo backend needs --weights and --options")
    return ElmoBackend(args.weights, args.options, batch_size=args.batch_size)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="paradigm-bridge")
    parser.add_argument("--backend", choices=["hash", "elmo"], default="hash")
    parser.add_argument("--dim", type=int, default=32, help="hash backend dim")
    parser.add_argument("--layers", type=int, default=3, help="hash backend layers")
    parser.add_argument("--weights", default=None, help="ELMo HDF5 weights path")
    parser.add_argument("--options", default=None, help="ELMo options JSON path")
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--tagger", choices=["none", "rule"], default="none")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="answer embed requests")
    p.add_argument("--transport", choices=["stdio", "http"], default="stdio")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8643)

    p = sub.add_parser("export", help="emit a JSONL token-embedding stream")
    p.add_argument("--corpus", required=True, help="text path, one sentence per line")
    p.add_argument("--layer-mode", choices=["top", "average"], default="top")

    args = parser.parse_args(argv)
    try:
        backend = make_backend(args)
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    tagger = rule_tagger if args.tagger == "rule" else None

    if args.command == "serve":
        if args.transport == "stdio":
            serve_stdio(backend, tagger)
        else:
            serve_http(backend, tagger, args.host, args.port)
        return 0

    with open(args.corpus, encoding="utf-8") as corpus:
        written, skipped = export_corpus_stream(
            backend, corpus, sys.stdout, args.layer_mode)
    print(f"wrote {written} records, skipped {skipped} lines", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
