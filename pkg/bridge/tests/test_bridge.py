import io
import json
import subprocess
import sys
import threading

import numpy as np
import pytest

from paradigm_bridge.backends import HashBackend, apply_layer_policy
from paradigm_bridge.cli import rule_tagger
from paradigm_bridge.export import export_corpus_stream
from paradigm_bridge.protocol import handle_line, serve_stdio


BACKEND = HashBackend(dim=8, n_layers=3)


def embed_line(req_id, tokens, mode="top"):
    return json.dumps({"id": req_id, "op": "embed", "tokens": tokens,
                       "layer_mode": mode})


def validate_reply(line, expected_id=None):
    """Wire grammar: one JSON object per line, id echoed, dim/vectors or error."""
    doc = json.loads(line)
    assert "\n" not in line.strip()
    assert "id" in doc
    if expected_id is not None:
        assert doc["id"] == expected_id
    if "error" in doc:
        assert isinstance(doc["error"], str)
        return doc
    assert isinstance(doc["dim"], int) and doc["dim"] > 0
    assert isinstance(doc["vectors"], list)
    for vec in doc["vectors"]:
        assert len(vec) == doc["dim"]
        assert all(isinstance(x, float) for x in vec)
    if "pos" in doc:
        assert len(doc["pos"]) == len(doc["vectors"])
    return doc


class TestHandleLine:
    def test_embed_reply_shape(self):
        doc = validate_reply(handle_line(embed_line(3, ["the", "cat"]), BACKEND), 3)
        assert doc["dim"] == 8
        assert len(doc["vectors"]) == 2

    def test_average_equals_per_layer_mean(self):
        tokens = ["a", "probe", "sentence"]
        doc = validate_reply(
            handle_line(embed_line(1, tokens, "average"), BACKEND), 1)
        layers = BACKEND.layers(tokens)
        mean = layers.mean(axis=0)
        got = np.asarray(doc["vectors"])
        assert np.abs(got - mean).max() < 1e-5

    def test_top_is_last_layer(self):
        tokens = ["probe"]
        doc = validate_reply(handle_line(embed_line(2, tokens, "top"), BACKEND), 2)
        assert np.allclose(doc["vectors"], BACKEND.layers(tokens)[-1])

    def test_malformed_line_yields_null_id_error(self):
        doc = validate_reply(handle_line("{broken", BACKEND))
        assert doc["id"] is None
        assert "error" in doc

    def test_unknown_op(self):
        line = json.dumps({"id": 9, "op": "train", "tokens": ["x"]})
        doc = validate_reply(handle_line(line, BACKEND), 9)
        assert "error" in doc

    def test_empty_tokens_rejected(self):
        doc = validate_reply(handle_line(embed_line(4, []), BACKEND), 4)
        assert "error" in doc

    def test_bad_layer_mode(self):
        doc = validate_reply(handle_line(embed_line(5, ["x"], "middle"), BACKEND), 5)
        assert "error" in doc

    def test_tagger_included_when_configured(self):
        doc = validate_reply(
            handle_line(embed_line(6, ["cat", "42", "!"]), BACKEND, rule_tagger), 6)
        assert doc["pos"] == ["NOUN", "NUM", "PUNCT"]

    def test_determinism(self):
        a = handle_line(embed_line(1, ["same", "input"]), BACKEND)
        b = handle_line(embed_line(1, ["same", "input"]), BACKEND)
        assert a == b


class TestTranscriptConformance:
    def test_recorded_session_validates(self):
        requests = [
            (0, ["hello"], "top"),
            (1, ["two", "tokens"], "average"),
            (2, ["a", "b", "c"], "top"),
        ]
        stdin = io.StringIO(
            "".join(embed_line(i, t, m) + "\n" for i, t, m in requests)
            + "this is not json\n")
        stdout = io.StringIO()
        serve_stdio(BACKEND, None, stdin=stdin, stdout=stdout)
        lines = stdout.getvalue().splitlines()
        assert len(lines) == 4
        for (req_id, tokens, _), line in zip(requests, lines):
            doc = validate_reply(line, req_id)
            assert len(doc["vectors"]) == len(tokens)
            assert doc["dim"] == BACKEND.dim
        assert "error" in validate_reply(lines[3])

    def test_dim_consistent_across_requests(self):
        for tokens in [["x"], ["x", "y"], ["one", "two", "three"]]:
            doc = validate_reply(handle_line(embed_line(0, tokens), BACKEND))
            assert doc["dim"] == BACKEND.dim


class TestExport:
    def test_one_record_per_token(self):
        corpus = io.StringIO("the cat sat\non the mat\n")
        out = io.StringIO()
        written, skipped = export_corpus_stream(BACKEND, corpus, out)
        assert (written, skipped) == (6, 0)
        records = [json.loads(l) for l in out.getvalue().splitlines()]
        assert [r["word"] for r in records] == ["the", "cat", "sat",
                                                "on", "the", "mat"]
        assert all(len(r["vec"]) == 8 for r in records)

    def test_two_exports_identical(self):
        outs = []
        for _ in range(2):
            out = io.StringIO()
            export_corpus_stream(BACKEND, io.StringIO("a small corpus\n"), out)
            outs.append(out.getvalue())
        assert outs[0] == outs[1]

    def test_empty_corpus(self):
        out = io.StringIO()
        assert export_corpus_stream(BACKEND, io.StringIO(""), out) == (0, 0)
        assert out.getvalue() == ""

    def test_tokens_lowercased(self):
        out = io.StringIO()
        export_corpus_stream(BACKEND, io.StringIO("The CAT\n"), out)
        words = [json.loads(l)["word"] for l in out.getvalue().splitlines()]
        assert words == ["the", "cat"]


class TestStdioProcess:
    def test_cli_serve_roundtrip(self):
        proc = subprocess.Popen(
            [sys.executable, "-m", "paradigm_bridge.cli",
             "--backend", "hash", "--dim", "8", "serve", "--transport", "stdio"],
            stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True)
        try:
            proc.stdin.write(embed_line(11, ["hi", "there"]) + "\n")
            proc.stdin.flush()
            doc = validate_reply(proc.stdout.readline(), 11)
            assert len(doc["vectors"]) == 2
            # malformed line does not kill the process
            proc.stdin.write("garbage\n")
            proc.stdin.flush()
            assert "error" in validate_reply(proc.stdout.readline())
            proc.stdin.write(embed_line(12, ["still", "alive"]) + "\n")
            proc.stdin.flush()
            validate_reply(proc.stdout.readline(), 12)
        finally:
            proc.kill()


class TestEngineIntegration:
    """The engine's provider client talking to this bridge over the wire."""

    def test_stdio_provider_against_bridge(self):
        paradigm = pytest.importorskip("paradigm")
        from paradigm.provider import (EmbeddingRequest, LayerMode,
                                       StdioBridgeProvider)

        cmd = (f"{sys.executable} -m paradigm_bridge.cli "
               f"--backend hash --dim 8 --tagger rule serve --transport stdio")
        provider = StdioBridgeProvider(cmd, dim=8)
        try:
            resp = provider.embed_tokens(
                EmbeddingRequest(("the", "cat"), LayerMode.AVERAGE))
            assert resp.dim == 8
            assert resp.vectors.shape == (2, 8)
            assert resp.pos_tags == ("NOUN", "NOUN")
            expected = apply_layer_policy(
                HashBackend(8, 3).layers(["the", "cat"]), "average")
            assert np.abs(resp.vectors - expected).max() < 1e-5
        finally:
            provider.close()
