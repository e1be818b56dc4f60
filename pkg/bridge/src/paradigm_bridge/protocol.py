"""The NDJSON provider protocol, server side.

One JSON document per line. Requests:
    {"id": <int>, "op": "embed", "tokens": [...], "layer_mode": "top"|"average"}
Success replies echo the id and carry "dim", "vectors" and optionally "pos";
failures carry "error". A malformed line gets an error reply with id null
and the process keeps serving.
"""

from __future__ import annotations

import json
from typing import Callable, Optional

import numpy as np

from .backends import apply_layer_policy

Tagger = Callable[[list[str]], list[str]]


def handle_line(line: str, backend, tagger: Optional[Tagger] = None) -> str:
    req_id = None
    try:
        doc = json.loads(line)
        req_id = doc.get("id")
        if doc.get("op") != "embed":
            raise ValueError(f"unsupported op {doc.get('op')!r}")
        tokens = doc["tokens"]
        if not isinstance(tokens, list) or not tokens or \
                not all(isinstance(t, str) and t for t in tokens):
            raise ValueError("tokens must be a non-empty list of non-empty strings")
        mode = doc.get("layer_mode", "top")
        vectors = apply_layer_policy(backend.layers(tokens), mode)
        reply = {"id": req_id, "dim": int(vectors.shape[1]),
                 "vectors": np.asarray(vectors).tolist()}
        if tagger is not None:
            reply["pos"] = tagger(tokens)
        return json.dumps(reply, ensure_ascii=False)
    except Exception as e:  # keep serving whatever happens to one line
        return json.dumps({"id": req_id, "error": str(e)}, ensure_ascii=False)


def serve_stdio(backend, tagger: Optional[Tagger] = None,
                stdin=None, stdout=None) -> None:
    import sys

    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    for line in stdin:
        if not line.strip():
            continue
        stdout.write(handle_line(line, backend, tagger) + "\n")
        stdout.flush()


def serve_http(backend, tagger: Optional[Tagger] = None,
               host: str = "127.0.0.1", port: int = 8643):
    """Blocking HTTP server: each POST body is one request line."""
    from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("content-length", 0))
            body = self.rfile.read(length).decode("utf-8")
            reply = handle_line(body.strip(), backend, tagger) + "\n"
            payload = reply.encode("utf-8")
            self.send_response(200)
            self.send_header("content-type", "application/x-ndjson")
            self.send_header("content-length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):
            pass

    server = ThreadingHTTPServer((host, port), Handler)
    server.serve_forever()
