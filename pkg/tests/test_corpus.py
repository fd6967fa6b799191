import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slukit.corpus import (
    Corpus,
    CorpusEntry,
    NormalizationOptions,
    format_report_json,
    format_report_tsv,
    join_systems,
    load_corpus,
    normalize,
    read_report,
    write_corpus,
    write_report,
)
from slukit.errors import (
    ConfidenceLengthMismatch,
    DuplicateId,
    InvalidParams,
    IoError,
    MalformedLine,
    MissingField,
    MissingHypothesis,
)
from slukit.metrics import EvalReport, SystemScore, UtteranceDetail


def write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content, encoding="utf-8")
    return p


class TestLoadCorpus:
    def test_jsonl(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1","text":"[IN:A b ]"}\n')
        c = load_corpus(p)
        assert c.system_id == "a"
        assert c.entries["u1"] == CorpusEntry("[IN:A b ]")

    def test_tsv(self, tmp_path):
        p = write(tmp_path, "a.tsv", "u2\tset an alarm\n# comment\n\n")
        c = load_corpus(p, "tsv")
        assert c.entries == {"u2": CorpusEntry("set an alarm")}

    def test_jsonl_confidences(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1","text":"a b","conf":[0.5,1.0]}\n')
        c = load_corpus(p)
        assert c.entries["u1"].confidences == (0.5, 1.0)

    def test_tsv_confidences(self, tmp_path):
        p = write(tmp_path, "a.tsv", "u1\ta b\t0.5 0.25\n")
        assert load_corpus(p, "tsv").entries["u1"].confidences == (0.5, 0.25)

    def test_duplicate_id_reports_both_lines(self, tmp_path):
        lines = [
            '{"id":"u1","text":"a"}',
            '{"id":"u2","text":"b"}',
            '{"id":"dup","text":"c"}',
            '{"id":"u3","text":"d"}',
            '{"id":"u4","text":"e"}',
            '{"id":"u5","text":"f"}',
            '{"id":"dup","text":"g"}',
        ]
        p = write(tmp_path, "a.jsonl", "\n".join(lines) + "\n")
        with pytest.raises(DuplicateId) as exc:
            load_corpus(p)
        assert exc.value.first_line == 3
        assert exc.value.second_line == 7

    def test_malformed_json_line_number(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1","text":"a"}\n{oops\n')
        with pytest.raises(MalformedLine) as exc:
            load_corpus(p)
        assert exc.value.line_no == 2

    def test_missing_field(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1"}\n')
        with pytest.raises(MissingField):
            load_corpus(p)

    def test_conf_length_mismatch(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1","text":"a b c","conf":[0.5]}\n')
        with pytest.raises(ConfidenceLengthMismatch):
            load_corpus(p)

    def test_conf_out_of_range(self, tmp_path):
        p = write(tmp_path, "a.jsonl", '{"id":"u1","text":"a","conf":[1.5]}\n')
        with pytest.raises(MalformedLine):
            load_corpus(p)

    def test_tsv_wrong_field_count(self, tmp_path):
        p = write(tmp_path, "a.tsv", "u1\ta\tb\tc\n")
        with pytest.raises(MalformedLine):
            load_corpus(p, "tsv")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_corpus(tmp_path / "nope.jsonl")

    def test_unknown_format(self, tmp_path):
        p = write(tmp_path, "a.jsonl", "")
        with pytest.raises(InvalidParams):
            load_corpus(p, "xml")

    @pytest.mark.parametrize("fmt", ["jsonl", "tsv"])
    def test_write_load_round_trip(self, tmp_path, fmt):
        corpus = Corpus(
            "sys",
            {
                "u1": CorpusEntry("[IN:A b ]"),
                "u2": CorpusEntry("a b c", (0.5, 0.3333333333333333, 1.0)),
                "u3": CorpusEntry("x"),
            },
        )
        p = tmp_path / f"c.{fmt}"
        write_corpus(corpus, p, fmt)
        assert load_corpus(p, fmt, system_id="sys") == corpus


class TestJoinSystems:
    def corpora(self):
        s1 = Corpus("s1", {"u1": CorpusEntry("a b"), "u2": CorpusEntry("c")})
        s2 = Corpus("s2", {"u1": CorpusEntry("a x"), "u2": CorpusEntry("c")})
        refs = Corpus("refs", {"u1": CorpusEntry("a b"), "u2": CorpusEntry("c")})
        return s1, s2, refs

    def test_complete_join(self):
        s1, s2, refs = self.corpora()
        bundles = join_systems([s1, s2], refs)
        assert [b.utterance_id for b in bundles] == ["u1", "u2"]
        assert bundles[0].per_system[0].tokens == ("a", "b")
        assert bundles[0].per_system[1].tokens == ("a", "x")
        assert bundles[0].per_system[1].system_index == 1
        assert bundles[0].reference == "a b"

    def test_strict_missing_hypothesis(self):
        s1, s2, refs = self.corpora()
        s2 = Corpus("s2", {"u1": CorpusEntry("a x")})
        with pytest.raises(MissingHypothesis) as exc:
            join_systems([s1, s2], refs)
        assert exc.value.system_id == "s2"
        assert exc.value.utterance_id == "u2"

    def test_allow_missing_gives_empty_tokens(self):
        s1, s2, refs = self.corpora()
        s2 = Corpus("s2", {"u1": CorpusEntry("a x")})
        bundles = join_systems([s1, s2], refs, policy="allow_missing")
        assert bundles[1].per_system[1].tokens == ()

    def test_line_order_independence(self):
        s1, s2, refs = self.corpora()
        s1_rev = Corpus("s1", dict(reversed(list(s1.entries.items()))))
        assert join_systems([s1_rev, s2], refs) == join_systems([s1, s2], refs)

    def test_without_references_uses_union(self):
        s1 = Corpus("s1", {"u1": CorpusEntry("a")})
        s2 = Corpus("s2", {"u1": CorpusEntry("a"), "u2": CorpusEntry("b")})
        bundles = join_systems([s1, s2], policy="allow_missing")
        assert [b.utterance_id for b in bundles] == ["u1", "u2"]
        assert bundles[1].reference is None

    def test_normalization_applied_to_tokens(self):
        s1 = Corpus("s1", {"u1": CorpusEntry("  Set   Alarm ")})
        refs = Corpus("r", {"u1": CorpusEntry("set alarm")})
        opts = NormalizationOptions(lowercase=True)
        bundles = join_systems([s1], refs, opts=opts)
        assert bundles[0].per_system[0].tokens == ("set", "alarm")

    def test_needs_a_system(self):
        with pytest.raises(InvalidParams):
            join_systems([])


class TestNormalize:
    def test_examples(self):
        assert normalize("  Set  Alarm ", NormalizationOptions(lowercase=True)) == "set alarm"
        assert normalize("already normal") == "already normal"
        assert normalize("") == ""

    @given(st.text(max_size=80))
    @settings(max_examples=300)
    def test_idempotent_and_non_increasing(self, s):
        opts = NormalizationOptions(lowercase=True)
        once = normalize(s, opts)
        assert normalize(once, opts) == once
        assert len(once) <= len(s)


def sample_report():
    return EvalReport(
        systems=(
            SystemScore("s1", 4, Fraction(3, 4), Fraction(1, 10)),
            SystemScore("s2", 4, Fraction(1, 3), None),
        ),
        combined=SystemScore("combined", 4, Fraction(1), Fraction(0)),
        utterances=(
            UtteranceDetail("u1", (True, False), True, False),
            UtteranceDetail("u2", (False, True), None, None),
        ),
    )


class TestReports:
    def test_json_fixed_precision_and_exact_fields(self, tmp_path):
        p = tmp_path / "r.json"
        write_report(sample_report(), p)
        text = p.read_text()
        assert '"em": 0.7500, "em_exact": "3/4"' in text
        assert '"em": 0.3333, "em_exact": "1/3"' in text
        assert '"wer": null, "wer_exact": null' in text
        json.loads(text)  # well-formed

    def test_json_round_trip(self, tmp_path):
        p = tmp_path / "r.json"
        report = sample_report()
        write_report(report, p)
        assert read_report(p) == report

    def test_row_order(self):
        text = format_report_json(sample_report())
        obj = json.loads(text)
        assert [r["system_id"] for r in obj["systems"]] == ["s1", "s2"]
        assert obj["combined"]["system_id"] == "combined"
        assert list(obj["systems"][0]) == [
            "system_id", "n", "em", "em_exact", "wer", "wer_exact",
        ]

    def test_tsv(self):
        text = format_report_tsv(sample_report())
        lines = text.splitlines()
        assert lines[0] == "system_id\tn\tem\tem_exact\twer\twer_exact"
        assert lines[1] == "s1\t4\t0.7500\t3/4\t0.1000\t1/10"
        assert lines[2] == "s2\t4\t0.3333\t1/3\t\t"
        assert lines[3].startswith("combined\t4\t1.0000\t1\t0.0000\t0")

    def test_config_header(self):
        text = format_report_json(sample_report(), config={"seed": 7, "n": 4})
        obj = json.loads(text)
        assert obj["config"] == {"seed": 7, "n": 4}

    def test_unknown_format(self, tmp_path):
        with pytest.raises(InvalidParams):
            write_report(sample_report(), tmp_path / "r.bin", "bin")
