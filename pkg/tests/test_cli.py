import io
import json
import random

import pytest

from translitkit import codebook, synth
from translitkit.cli import main
from translitkit.translit import to_latin

LOW_RESOURCE = ("bo", "mn", "ug")


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """End-to-end artifact set built through the CLI itself where possible."""
    root = tmp_path_factory.mktemp("cli")
    rng = random.Random(2024)

    lines = synth.mixed_lines(rng, 400)
    corpus = root / "corpus.txt"
    corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")

    assert main(["analyze", str(corpus), "-o", str(root / "freq.tsv")]) == 0
    assert main([
        "build-codebook", "--freq", str(root / "freq.tsv"),
        "--strategy", "basic", "--scripts", "Tibetan,Mongolian,Uyghur",
        "-o", str(root / "cb.tsv"),
    ]) == 0
    cb = codebook.load_path(str(root / "cb.tsv"))

    encoded_lines = [to_latin(line, cb) for line in lines]
    encoded = root / "encoded.txt"
    encoded.write_text("\n".join(encoded_lines) + "\n", encoding="utf-8")

    assert main(["bpe-train", str(encoded), "--vocab-size", "400",
                 "-o", str(root / "bpe")]) == 0

    labeled_raw = root / "labeled_raw.txt"
    pairs = synth.labeled_lines(rng, 120)
    labeled_raw.write_text(
        "".join(f"__label__{tag}\t{text}\n" for text, tag in pairs), encoding="utf-8"
    )
    labeled_enc = root / "labeled_enc.txt"
    labeled_enc.write_text(
        "".join(
            f"__label__{tag}\t{to_latin(text, cb) if tag in LOW_RESOURCE else text}\n"
            for text, tag in pairs
        ),
        encoding="utf-8",
    )
    (root / "lid-input.cfg").write_text(
        "preset = input\nepochs = 3\nmin_count = 1\nhash_buckets = 65536\n", encoding="utf-8"
    )
    (root / "lid-output.cfg").write_text(
        "preset = output\nepochs = 3\nmin_count = 1\nhash_buckets = 65536\n", encoding="utf-8"
    )
    assert main(["langid-train", str(labeled_raw), "--params", str(root / "lid-input.cfg"),
                 "-o", str(root / "in.lid")]) == 0
    assert main(["langid-train", str(labeled_enc), "--params", str(root / "lid-output.cfg"),
                 "-o", str(root / "out.lid")]) == 0

    (root / "pipeline.cfg").write_text(
        "codebook = cb.tsv\ninput_model = in.lid\noutput_model = out.lid\n"
        "model_stage = identity\ndecode_mode = strict\nconfidence_threshold = 0.5\n",
        encoding="utf-8",
    )
    return root, cb, lines


def test_version(capsys):
    assert main(["--version"]) == 0
    out = capsys.readouterr().out
    assert "translitkit" in out and "codebook-tsv" in out


def test_usage_errors_exit_1(capsys):
    assert main(["encode"]) == 1  # missing --codebook
    assert main(["no-such-command"]) == 1
    assert main([]) == 1
    err = capsys.readouterr().err
    assert "error: usage:" in err


def test_missing_file_exits_2(capsys, tmp_path):
    assert main(["verify", str(tmp_path / "nope.txt"), "--codebook", str(tmp_path / "cb.tsv")]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_analyze_stdout_is_tsv(workspace, capsys):
    root, _, _ = workspace
    assert main(["analyze", str(root / "corpus.txt")]) == 0
    out = capsys.readouterr().out
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows and all(len(r.split("\t")) == 4 for r in rows)


def test_encode_decode_roundtrip(workspace, capsys, monkeypatch):
    root, _, lines = workspace
    text_in = "\n".join(lines[:100]) + "\n"
    monkeypatch.setattr("sys.stdin", io.StringIO(text_in))
    assert main(["encode", "--codebook", str(root / "cb.tsv")]) == 0
    encoded = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io.StringIO(encoded))
    assert main(["decode", "--codebook", str(root / "cb.tsv")]) == 0
    decoded = capsys.readouterr().out
    assert decoded == text_in


def test_decode_strict_error_exits_2(workspace, capsys, monkeypatch):
    root, _, _ = workspace
    monkeypatch.setattr("sys.stdin", io.StringIO("Zz\n"))
    code = main(["decode", "--codebook", str(root / "cb.tsv"), "--mode", "strict"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_decode_lenient_warns(workspace, capsys, monkeypatch):
    root, _, _ = workspace
    monkeypatch.setattr("sys.stdin", io.StringIO("Zz\n"))
    assert main(["decode", "--codebook", str(root / "cb.tsv"), "--mode", "lenient"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "Zz\n"
    assert "decode warnings: 1" in captured.err


def test_verify_reports_zero_failures(workspace, capsys):
    root, _, _ = workspace
    assert main(["verify", str(root / "corpus.txt"), "--codebook", str(root / "cb.tsv")]) == 0
    out = capsys.readouterr().out
    assert "failures: 0" in out


def test_verify_exit_3_on_failures(workspace, capsys, monkeypatch):
    import translitkit.cli as cli_mod
    from translitkit.translit import RoundtripReport

    root, _, _ = workspace
    monkeypatch.setattr(
        cli_mod.translit, "verify_roundtrip", lambda lines, cb: RoundtripReport(5, 2, 1)
    )
    assert main(["verify", str(root / "corpus.txt"), "--codebook", str(root / "cb.tsv")]) == 3
    out = capsys.readouterr().out
    assert "failures: 2" in out and "first_failure_offset: 1" in out


def test_stats_json_and_human(workspace, capsys):
    root, _, _ = workspace
    args = [
        "stats", str(root / "corpus.txt"), str(root / "encoded.txt"),
        "--bpe", str(root / "bpe"), "--codebook", str(root / "cb.tsv"), "--lang", "mixed",
    ]
    assert main(args) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["language_tag"] == "mixed"
    assert record["file_ratio"] > 1.0
    assert record["original_bytes"] > record["encoded_bytes"]
    assert main(args + ["--human"]) == 0
    table = capsys.readouterr().out
    assert "File Compr." in table and "basic" in table


def test_bpe_merge_cli(workspace, tmp_path, capsys):
    root, _, _ = workspace
    assert main(["bpe-merge", str(root / "bpe"), str(root / "bpe"),
                 "-o", str(tmp_path / "merged")]) == 0
    from translitkit.bpe import load_model

    assert load_model(str(tmp_path / "merged")) == load_model(str(root / "bpe"))


def test_detect_text_and_stdin(workspace, capsys, monkeypatch):
    root, _, _ = workspace
    tib = "ཀཁགངཅཆཇཉཏཐདནཔཕབམ"
    assert main(["detect", tib, "--model", str(root / "in.lid")]) == 0
    label, conf = capsys.readouterr().out.strip().split("\t")
    assert label == "bo"
    assert 0.0 < float(conf) <= 1.0

    monkeypatch.setattr("sys.stdin", io.StringIO(f"{tib}\nhello world again\n"))
    assert main(["detect", "--model", str(root / "in.lid")]) == 0
    labels = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert labels == ["bo", "other"]


def test_pipeline_cli_identity(workspace, capsys, monkeypatch):
    root, _, lines = workspace
    sample = [line for line in lines[:40]]
    monkeypatch.setattr("sys.stdin", io.StringIO("\n".join(sample) + "\n"))
    assert main(["pipeline", "--config", str(root / "pipeline.cfg"), "--trace"]) == 0
    captured = capsys.readouterr()
    assert captured.out == "\n".join(sample) + "\n"
    traces = [json.loads(line) for line in captured.err.splitlines() if line.startswith("{")]
    assert len(traces) == len(sample)
    assert all(t["error"] is None for t in traces)


def test_encode_with_lossy_transform(workspace, tmp_path, capsys, monkeypatch):
    root, cb, _ = workspace
    some_mapped = min(cb.char_to_code)
    transform = tmp_path / "pinyin.tsv"
    transform.write_text("4F60\tni3\n", encoding="utf-8")
    monkeypatch.setattr("sys.stdin", io.StringIO("你" + chr(some_mapped) + "\n"))
    assert main(["encode", "--codebook", str(root / "cb.tsv"),
                 "--transform", str(transform)]) == 0
    out = capsys.readouterr().out
    assert out == "ni3" + cb.char_to_code[some_mapped] + "\n"


def test_build_codebook_tokenizer_requires_bpe(workspace, capsys):
    root, _, _ = workspace
    code = main(["build-codebook", "--freq", str(root / "freq.tsv"), "--strategy", "tokenizer"])
    assert code == 1
    assert "requires --bpe" in capsys.readouterr().err


def test_build_codebook_tokenizer_strategy(workspace, tmp_path, capsys):
    root, _, _ = workspace
    out = tmp_path / "cb-tok.tsv"
    assert main([
        "build-codebook", "--freq", str(root / "freq.tsv"), "--strategy", "tokenizer",
        "--scripts", "Tibetan,Mongolian,Uyghur", "--bpe", str(root / "bpe"), "-o", str(out),
    ]) == 0
    cb = codebook.load_path(str(out))
    assert cb.strategy == "tokenizer_opt"
    assert all(e.token_count >= 1 for e in cb.entries)
