from fractions import Fraction

import pytest

from slukit.corpus import Corpus, CorpusEntry
from slukit.errors import InvalidParams
from slukit.metrics import corpus_wer
from slukit.rover import VoteConfig
from slukit.synth import (
    CorruptionSpec,
    corrupt,
    gen_reference_corpus,
    run_combination_experiment,
)
from slukit.trees import TagRole, tokenize, validate


class TestCorruptionSpec:
    def test_rates_must_be_probabilities(self):
        with pytest.raises(InvalidParams):
            CorruptionSpec(sub_rate=1.2)
        with pytest.raises(InvalidParams):
            CorruptionSpec(sub_rate=0.5, del_rate=0.4, ins_rate=0.3)


class TestGenReferenceCorpus:
    def test_deterministic(self):
        a = gen_reference_corpus(3, 50)
        b = gen_reference_corpus(3, 50)
        assert a == b

    def test_transcript_lengths(self):
        c = gen_reference_corpus(0, 200)
        for e in c.entries.values():
            assert 4 <= len(e.text.split()) <= 12

    def test_parse_mode_all_valid(self):
        c = gen_reference_corpus(1, 200, mode="parse")
        for e in c.entries.values():
            assert validate(e.text) == "Valid"

    def test_n_zero_rejected(self):
        with pytest.raises(InvalidParams):
            gen_reference_corpus(0, 0)

    def test_unknown_mode(self):
        with pytest.raises(InvalidParams):
            gen_reference_corpus(0, 1, mode="audio")

    def test_ids_sorted(self):
        c = gen_reference_corpus(0, 30)
        ids = list(c.entries)
        assert ids == sorted(ids)


class TestCorrupt:
    def test_zero_rates_identity(self):
        refs = gen_reference_corpus(5, 50)
        out = corrupt(refs, CorruptionSpec(0.0, 0.0, 0.0, seed=1), "s")
        assert {k: e.text for k, e in out.entries.items()} == {
            k: e.text for k, e in refs.entries.items()
        }

    def test_full_substitution_changes_every_word(self):
        refs = gen_reference_corpus(5, 30)
        out = corrupt(refs, CorruptionSpec(1.0, 0.0, 0.0, seed=2), "s")
        for utt_id, e in out.entries.items():
            orig = refs.entries[utt_id].text.split()
            new = e.text.split()
            assert len(orig) == len(new)
            assert all(a != b for a, b in zip(orig, new))

    def test_protect_brackets(self):
        refs = gen_reference_corpus(7, 100, mode="parse")
        spec = CorruptionSpec(0.5, 0.2, 0.2, seed=3, protect_brackets=True)
        out = corrupt(refs, spec, "s")
        for utt_id, e in out.entries.items():
            orig_tags = [
                t.surface for t in tokenize(refs.entries[utt_id].text)
                if t.role is not TagRole.WORD
            ]
            new_tags = [
                t.surface for t in tokenize(e.text) if t.role is not TagRole.WORD
            ]
            assert orig_tags == new_tags

    def test_measured_wer_tracks_sub_rate(self):
        # 10% substitutions over >=10k tokens lands near 0.10
        refs = gen_reference_corpus(11, 1500)
        n_tokens = sum(len(e.text.split()) for e in refs.entries.values())
        assert n_tokens >= 10_000
        out = corrupt(refs, CorruptionSpec(0.1, 0.0, 0.0, seed=13), "s")
        measured = corpus_wer(
            (out.entries[k].text.split(), refs.entries[k].text.split())
            for k in refs.entries
        )
        assert Fraction(8, 100) <= measured <= Fraction(12, 100)

    def test_wer_strictly_increases_with_sub_rate(self):
        refs = gen_reference_corpus(11, 1500)

        def measure(rate):
            out = corrupt(refs, CorruptionSpec(rate, 0.0, 0.0, seed=13), "s")
            return corpus_wer(
                (out.entries[k].text.split(), refs.entries[k].text.split())
                for k in refs.entries
            )

        assert measure(0.05) < measure(0.30)

    def test_explicit_vocab(self):
        refs = Corpus("r", {"u1": CorpusEntry("a a a a a a")})
        out = corrupt(refs, CorruptionSpec(1.0, 0.0, 0.0, seed=1), "s", vocab=["a", "z"])
        assert out.entries["u1"].text == "z z z z z z"


class TestExperiment:
    def test_zero_rates_perfect_scores(self):
        exp = run_combination_experiment(
            30, 3, CorruptionSpec(0.0, 0.0, 0.0, seed=5)
        )
        assert exp.scores.combined.em == 1
        assert exp.scores.combined.wer == 0
        for row in exp.scores.systems:
            assert row.em == 1 and row.wer == 0

    def test_deterministic_rerun(self):
        a = run_combination_experiment(50, 3, CorruptionSpec(0.2, 0.05, 0.05, seed=6))
        b = run_combination_experiment(50, 3, CorruptionSpec(0.2, 0.05, 0.05, seed=6))
        assert a.scores == b.scores
        assert a.combined == b.combined
        assert a.config == b.config

    def test_combination_beats_best_single(self):
        exp = run_combination_experiment(300, 5, CorruptionSpec(0.1, 0.0, 0.0, seed=7))
        best = min(row.wer for row in exp.scores.systems)
        assert exp.scores.combined.wer < best

    def test_parse_mode_fallback_accounting(self):
        exp = run_combination_experiment(
            100,
            3,
            CorruptionSpec(0.3, 0.1, 0.1, seed=8, protect_brackets=True),
            mode="parse",
        )
        flags = [u.fell_back for u in exp.scores.utterances]
        assert all(f is not None for f in flags)
        assert exp.fell_back_count == sum(flags)
        # every combined output is a valid parse or carries the flag
        for u, (utt_id, e) in zip(exp.scores.utterances, exp.combined.entries.items()):
            assert validate(e.text) == "Valid" or u.fell_back

    def test_needs_two_systems(self):
        with pytest.raises(InvalidParams):
            run_combination_experiment(10, 1, CorruptionSpec(seed=1))

    def test_config_echo_covers_rerun(self):
        exp = run_combination_experiment(
            20, 2, CorruptionSpec(0.1, 0.0, 0.0, seed=9), VoteConfig(alpha=1.0)
        )
        cfg = exp.config
        respec = CorruptionSpec(
            cfg["sub_rate"], cfg["del_rate"], cfg["ins_rate"], cfg["seed"],
            cfg["protect_brackets"],
        )
        again = run_combination_experiment(
            cfg["n_utterances"], cfg["n_systems"], respec,
            VoteConfig(cfg["alpha"], cfg["null_confidence"]), cfg["mode"],
        )
        assert again.scores == exp.scores
