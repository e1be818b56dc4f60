"""Operator CLI: build stores, run one-off queries, inspect, serve.

Machine-readable output goes to stdout, everything human-readable to
stderr. Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import lexicon as lx
from . import typestore
from .errors import ParadigmError
from .lexicon import FrequencyLexicon
from .provider import LayerMode, ReferenceEmbedder
from .substitute import QuerySpec, analyze, render_plain, to_payload


def _eprint(*args):
    print(*args, file=sys.stderr)


def cmd_build_store(args) -> int:
    try:
        acc = typestore.Accumulator(args.dim, LayerMode.parse(args.layer_mode))
        stream = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
        records = 0
        try:
            for word, vec in typestore.iter_records(stream):
                acc.accumulate(word, vec)
                records += 1
        finally:
            if stream is not sys.stdin:
                stream.close()
        stats: dict = {}
        metadata = {"builder": "paradigm build-store",
                    "vocab_limit": str(args.vocab_limit),
                    "language": args.language}
        if args.lexicon:
            metadata["lexicon"] = args.lexicon
        store = typestore.finalize(
            acc, args.vocab_limit,
            exclusion=lx.exclusion_predicate(args.language),
            metadata=metadata, stats_out=stats)
        tmp = args.output + ".tmp"
        try:
            written = typestore.save(store, tmp)
            os.replace(tmp, args.output)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        _eprint(f"records read:        {records}")
        _eprint(f"word types seen:     {stats['types_seen']}")
        _eprint(f"dropped (excluded):  {stats['excluded']}")
        _eprint(f"dropped (over limit): {stats['dropped_over_limit']}")
        _eprint(f"dropped (zero norm): {stats['dropped_zero_norm']}")
        _eprint(f"kept:                {stats['kept']}")
        _eprint(f"wrote {written} bytes to {args.output}")
        return 0
    except (ParadigmError, OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        _eprint(f"error: {e}")
        return 1


def _lexicon_for(args, store) -> FrequencyLexicon:
    if args.lexicon:
        return lx.load_freq_dict(args.lexicon)
    return FrequencyLexicon.from_counts(
        dict(zip(store.words, store.frequencies)))


def cmd_query(args) -> int:
    try:
        store = typestore.load(args.store)
        lexicon = _lexicon_for(args, store)
        provider = ReferenceEmbedder(store.dim)
        query = QuerySpec(sentence=args.sentence,
                          layer_mode=LayerMode.parse(args.layer_mode),
                          n=args.n)
        result = analyze(query, store, lexicon, provider)
        if args.format == "plain":
            sys.stdout.write(render_plain(result))
        else:
            json.dump(to_payload(result), sys.stdout, ensure_ascii=False, indent=2)
            sys.stdout.write("\n")
        return 0
    except (ParadigmError, OSError, ValueError) as e:
        _eprint(f"error: {e}")
        return 1


def cmd_inspect(args) -> int:
    try:
        store = typestore.load(args.store)
    except (ParadigmError, OSError) as e:
        _eprint(f"error: {e}")
        return 1
    print(f"dim:        {store.dim}")
    print(f"layer_mode: {store.layer_mode.value}")
    print(f"entries:    {len(store)}")
    print(f"metadata:   {json.dumps(store.metadata, ensure_ascii=False, sort_keys=True)}")
    print("checksum:   ok")
    if args.word is not None:
        rank = store.rank(args.word)
        if rank is None:
            print(f"word {args.word!r}: not found")
        else:
            head = ", ".join(f"{x:.6f}" for x in store.vector(args.word)[:8])
            print(f"word {args.word!r}: rank {rank}, "
                  f"frequency {store.frequency(args.word)}, vector[:8] = [{head}]")
    return 0


def cmd_serve(args) -> int:
    from . import service

    try:
        service.serve(config_path=args.config)
        return 0
    except ParadigmError as e:
        _eprint(f"error: {e}")
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paradigm",
        description="Two-dimensional text: in-context lexical substitutes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-store", help="build a .tvs store from a JSONL stream")
    p.add_argument("--input", required=True, help="JSONL path, or - for stdin")
    p.add_argument("--output", required=True, help=".tvs output path")
    p.add_argument("--dim", required=True, type=int)
    p.add_argument("--layer-mode", default="top", choices=["top", "average"])
    p.add_argument("--vocab-limit", type=int, default=10000)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--language", default="en")
    p.set_defaults(func=cmd_build_store)

    p = sub.add_parser("query", help="analyze one sentence against a store")
    p.add_argument("--store", required=True)
    p.add_argument("--lexicon", default=None)
    p.add_argument("--sentence", required=True)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--layer-mode", default="top", choices=["top", "average"])
    p.add_argument("--format", default="plain", choices=["plain", "json"])
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("inspect", help="print store header and checksum status")
    p.add_argument("--store", required=True)
    p.add_argument("--word", default=None)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None,
                   help="TOML config path (or set PARADIGM_CONFIG)")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
