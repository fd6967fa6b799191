import json
from pathlib import Path

from slukit.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
REFS = str(FIXTURES / "refs.jsonl")


def test_tsv_report_extension(tmp_path):
    report = tmp_path / "report.tsv"
    rc = main(["eval", "--ref", REFS, "--hyp", str(FIXTURES / "sys1.jsonl"),
               "--report", str(report), "--quiet"])
    assert rc == 0
    lines = report.read_text().splitlines()
    assert lines[0].startswith("system_id\tn\tem")
    assert lines[1].split("\t")[3] == "5/6"


def test_tsv_corpus_input(tmp_path):
    ref = tmp_path / "ref.tsv"
    hyp = tmp_path / "hyp.tsv"
    ref.write_text("# references\nu1\t[IN:A b ]\nu2\t[IN:B c ]\n")
    hyp.write_text("u1\t[IN:A b ]\nu2\t[IN:B x ]\n")
    report = tmp_path / "r.json"
    rc = main(["eval", "--ref", str(ref), "--hyp", str(hyp),
               "--report", str(report), "--quiet"])
    assert rc == 0
    row = json.loads(report.read_text())["systems"][0]
    assert row["em_exact"] == "1/2"


def test_confidence_weighted_combination(tmp_path):
    # counts tie 1-1 per position; confidences must decide under alpha 0.5
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text('{"id":"u1","text":"nine","conf":[0.2]}\n')
    b.write_text('{"id":"u1","text":"five","conf":[0.9]}\n')
    out = tmp_path / "combined.jsonl"
    rc = main(["combine", "--hyp", str(a), "--hyp", str(b), "--task", "asr",
               "--alpha", "0.5", "--out", str(out), "--quiet"])
    assert rc == 0
    assert json.loads(out.read_text())["text"] == "five"
    # frequency-only voting breaks the tie toward the first-listed system
    rc = main(["combine", "--hyp", str(a), "--hyp", str(b), "--task", "asr",
               "--alpha", "1.0", "--out", str(out), "--quiet"])
    assert rc == 0
    assert json.loads(out.read_text())["text"] == "nine"


def test_alpha_without_confidences_is_data_error(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text('{"id":"u1","text":"nine"}\n')
    b.write_text('{"id":"u1","text":"five"}\n')
    out = tmp_path / "combined.jsonl"
    rc = main(["combine", "--hyp", str(a), "--hyp", str(b), "--task", "asr",
               "--alpha", "0.5", "--out", str(out), "--quiet"])
    assert rc == 2
    assert "MissingConfidences" in capsys.readouterr().err


def test_allow_missing_policy(tmp_path):
    full = tmp_path / "full.jsonl"
    partial = tmp_path / "partial.jsonl"
    ref = tmp_path / "ref.jsonl"
    full.write_text('{"id":"u1","text":"a b"}\n{"id":"u2","text":"c d"}\n')
    partial.write_text('{"id":"u1","text":"a b"}\n')
    ref.write_text('{"id":"u1","text":"a b"}\n{"id":"u2","text":"c d"}\n')
    report = tmp_path / "r.json"
    rc = main(["eval", "--ref", str(ref), "--hyp", str(full), "--hyp", str(partial),
               "--task", "asr", "--policy", "allow_missing",
               "--report", str(report), "--quiet"])
    assert rc == 0
    rows = json.loads(report.read_text())["systems"]
    assert rows[0]["wer_exact"] == "0"
    assert rows[1]["wer_exact"] == "1/2"  # u2's two tokens count as deletions


def test_weighted_voting_with_absent_hypothesis(tmp_path):
    # an absent hypothesis must not block confidence-weighted voting
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text('{"id":"u1","text":"nine am","conf":[0.9,0.9]}\n')
    b.write_text('{"id":"u2","text":"x","conf":[0.5]}\n'
                 '{"id":"u1","text":"five am","conf":[0.4,0.9]}\n')
    out = tmp_path / "combined.jsonl"
    rc = main(["combine", "--hyp", str(a), "--hyp", str(b), "--task", "asr",
               "--alpha", "0.5", "--policy", "allow_missing",
               "--out", str(out), "--quiet"])
    assert rc == 0
    texts = {json.loads(l)["id"]: json.loads(l)["text"]
             for l in out.read_text().splitlines()}
    assert texts["u1"] == "nine am"  # higher-confidence word wins the tie
    assert texts["u2"] == "x"        # lone system survives its NULL rival


def test_version_flag(capsys):
    import pytest

    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "slukit" in capsys.readouterr().out
