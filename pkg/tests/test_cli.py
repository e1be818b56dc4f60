import json
import os
from pathlib import Path

import pytest

from conftest import CONTENT_WORDS, DIM
from paradigm import typestore
from paradigm.cli import main
from paradigm.provider import EmbeddingRequest, LayerMode, ReferenceEmbedder

GOLDEN_DIR = Path(__file__).parent / "goldens"
GOLDEN_SENTENCES = {
    "the_cat.txt": "the cat",
    "river_walks.txt": "a bird walks by the river",
    "punctuation.txt": "blue light, green stone!",
}


def stream_lines(words=CONTENT_WORDS, repeats=3, dim=DIM):
    """JSONL build input: every word observed as a one-token sentence."""
    emb = ReferenceEmbedder(dim)
    lines = ["# synthetic single-context corpus"]
    for w in words:
        vec = emb.embed_tokens(EmbeddingRequest((w,), LayerMode.TOP)).vectors[0]
        for _ in range(repeats):
            lines.append(json.dumps({"word": w, "vec": list(vec)}))
    return "\n".join(lines) + "\n"


@pytest.fixture
def built_store(tmp_path):
    src = tmp_path / "stream.jsonl"
    src.write_text(stream_lines(), encoding="utf-8")
    out = tmp_path / "store.tvs"
    rc = main(["build-store", "--input", str(src), "--output", str(out),
               "--dim", str(DIM), "--layer-mode", "top"])
    assert rc == 0
    return out


class TestBuildStore:
    def test_vocab_limit_and_summary(self, tmp_path, capsys):
        src = tmp_path / "s.jsonl"
        src.write_text(stream_lines(words=["cat", "dog", "eel"], repeats=1),
                       encoding="utf-8")
        # give cat more observations so the kept pair is deterministic
        extra = stream_lines(words=["cat"], repeats=2)
        src.write_text(src.read_text() + extra, encoding="utf-8")
        out = tmp_path / "s.tvs"
        rc = main(["build-store", "--input", str(src), "--output", str(out),
                   "--dim", str(DIM), "--vocab-limit", "2"])
        assert rc == 0
        store = typestore.load(str(out))
        assert len(store) == 2
        assert store.words[0] == "cat"
        err = capsys.readouterr().err
        assert "dropped (over limit): 1" in err

    def test_digit_words_excluded_and_counted(self, tmp_path, capsys):
        src = tmp_path / "s.jsonl"
        src.write_text(stream_lines(words=["cat", "x9"], repeats=1),
                       encoding="utf-8")
        out = tmp_path / "s.tvs"
        rc = main(["build-store", "--input", str(src), "--output", str(out),
                   "--dim", str(DIM)])
        assert rc == 0
        store = typestore.load(str(out))
        assert "x9" not in store.words
        assert "dropped (excluded):  1" in capsys.readouterr().err

    def test_wrong_vector_length_fails_atomically(self, tmp_path, capsys):
        src = tmp_path / "s.jsonl"
        src.write_text(
            json.dumps({"word": "cat", "vec": [1.0, 0.0]}) + "\n",
            encoding="utf-8")
        out = tmp_path / "s.tvs"
        rc = main(["build-store", "--input", str(src), "--output", str(out),
                   "--dim", str(DIM)])
        assert rc == 1
        assert not out.exists()
        assert not (tmp_path / "s.tvs.tmp").exists()

    def test_empty_stream_fails(self, tmp_path):
        src = tmp_path / "s.jsonl"
        src.write_text("# nothing\n", encoding="utf-8")
        rc = main(["build-store", "--input", str(src),
                   "--output", str(tmp_path / "s.tvs"), "--dim", str(DIM)])
        assert rc == 1


class TestQuery:
    @pytest.mark.parametrize("golden,sentence", sorted(GOLDEN_SENTENCES.items()))
    def test_plain_grid_matches_golden(self, built_store, capsys,
                                       golden, sentence):
        rc = main(["query", "--store", str(built_store),
                   "--sentence", sentence, "--n", "3", "--format", "plain"])
        assert rc == 0
        out = capsys.readouterr().out
        expected = (GOLDEN_DIR / golden).read_text(encoding="utf-8")
        assert out == expected

    def test_json_output_matches_service_schema(self, built_store, capsys):
        rc = main(["query", "--store", str(built_store),
                   "--sentence", "the cat", "--format", "json"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc) == {"model", "layer_mode", "n", "tokens"}
        tok = doc["tokens"][1]
        assert set(tok) == {"surface", "pos", "functional", "tier", "substitutes"}
        assert set(tok["substitutes"][0]) == {"word", "similarity", "tier"}

    def test_layer_mode_mismatch_exits_one(self, built_store, capsys):
        rc = main(["query", "--store", str(built_store),
                   "--sentence", "cat", "--layer-mode", "average"])
        assert rc == 1
        assert "average" in capsys.readouterr().err

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["query", "--no-such-flag"])
        assert exc.value.code == 2

    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestInspect:
    def test_reports_build_parameters(self, built_store, capsys):
        rc = main(["inspect", "--store", str(built_store)])
        assert rc == 0
        out = capsys.readouterr().out
        assert f"dim:        {DIM}" in out
        assert "layer_mode: top" in out
        assert f"entries:    {len(CONTENT_WORDS)}" in out
        assert "checksum:   ok" in out

    def test_word_lookup(self, built_store, capsys):
        rc = main(["inspect", "--store", str(built_store), "--word", "cat"])
        assert rc == 0
        assert "rank" in capsys.readouterr().out

    def test_absent_word_is_not_an_error(self, built_store, capsys):
        rc = main(["inspect", "--store", str(built_store), "--word", "zz"])
        assert rc == 0
        assert "not found" in capsys.readouterr().out

    def test_corrupted_final_byte(self, built_store, capsys):
        data = bytearray(built_store.read_bytes())
        data[-1] ^= 0xFF
        built_store.write_bytes(bytes(data))
        rc = main(["inspect", "--store", str(built_store)])
        assert rc == 1
        assert "checksum" in capsys.readouterr().err.lower()
