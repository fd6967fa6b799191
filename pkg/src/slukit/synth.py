"""Synthetic combination experiments.

Generates a reference corpus (random transcripts or random linearized
parses), simulates N imperfect systems by corrupting it with independent
per-system noise, then combines and scores everything. Independent errors
are exactly the regime where majority voting pays off, so the harness
reproduces the combination-beats-best-single-system pattern at desk scale.

All randomness is derived from (seed, utterance index), so results are
reproducible and independent of evaluation order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .corpus import Corpus, CorpusEntry, join_systems
from .errors import InvalidParams
from .metrics import EvalReport, build_report
from .rover import DEFAULT_VOTE, VoteConfig, combine, combine_parses
from .textnorm import DEFAULT_NORM
from .trees import TagRole, random_tree, serialize, tokenize

# Default generator vocabulary: enough words that independently drawn
# substitution errors rarely coincide across systems.
WORD_VOCAB = [
    "alarm", "appointment", "austin", "boston", "call", "cancel", "chicago",
    "city", "concert", "dallas", "dad", "day", "denver", "evening", "five",
    "for", "forecast", "friday", "friend", "game", "home", "hour", "in",
    "jazz", "list", "meeting", "message", "mom", "monday", "morning",
    "music", "next", "nine", "noon", "office", "party", "play", "please",
    "rain", "reminder", "rock", "seattle", "send", "set", "seven", "show",
    "six", "snow", "song", "ten", "the", "three", "today", "tomorrow",
    "tonight", "traffic", "tuesday", "weather", "week", "weekend",
]

INTENT_LABELS = [
    "GET_WEATHER", "CREATE_ALARM", "PLAY_MUSIC", "CREATE_REMINDER",
    "GET_EVENT", "SEND_MESSAGE", "GET_INFO_TRAFFIC", "CANCEL_ALARM",
]

SLOT_LABELS = [
    "LOCATION", "DATE_TIME", "MUSIC_ARTIST", "TODO", "CONTACT",
    "RECIPIENT", "WEATHER_ATTRIBUTE", "MUSIC_GENRE",
]

MODES = ("transcript", "parse")

_MIX = 1_000_003  # per-utterance seed derivation: seed * _MIX + index


@dataclass(frozen=True)
class CorruptionSpec:
    """Per-token corruption model for one simulated system.

    Events are disjoint per token: substitute with probability
    ``sub_rate``, delete with ``del_rate``, insert a random word after
    with ``ins_rate``. With ``protect_brackets`` intent/slot/close tag
    tokens are exempt, so corrupted parses stay structurally valid.
    """

    sub_rate: float = 0.1
    del_rate: float = 0.0
    ins_rate: float = 0.0
    seed: int = 0
    protect_brackets: bool = False

    def __post_init__(self):
        for name in ("sub_rate", "del_rate", "ins_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParams(f"{name} must be in [0, 1], got {v}")
        total = self.sub_rate + self.del_rate + self.ins_rate
        if total > 1.0:
            raise InvalidParams(f"event rates must sum to <= 1, got {total}")


@dataclass(frozen=True)
class ExperimentReport:
    """Scores plus everything needed to re-run the experiment."""

    config: dict
    scores: EvalReport
    references: Corpus
    systems: tuple[Corpus, ...]
    combined: Corpus

    @property
    def fell_back_count(self) -> int:
        return sum(1 for u in self.scores.utterances if u.fell_back)


def gen_reference_corpus(
    seed: int,
    n: int,
    mode: str = "transcript",
    vocab: list | None = None,
    intent_labels: list | None = None,
    slot_labels: list | None = None,
    max_depth: int = 3,
    min_len: int = 4,
    max_len: int = 12,
    system_id: str = "reference",
) -> Corpus:
    """Random reference corpus: word sequences or linearized parse trees."""
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    if mode not in MODES:
        raise InvalidParams(f"unknown mode {mode!r} (expected transcript or parse)")
    if not 1 <= min_len <= max_len:
        raise InvalidParams(f"bad length range [{min_len}, {max_len}]")
    vocab = list(vocab) if vocab is not None else WORD_VOCAB
    if not vocab:
        raise InvalidParams("vocab must be non-empty")
    intents = list(intent_labels) if intent_labels is not None else INTENT_LABELS
    slots = list(slot_labels) if slot_labels is not None else SLOT_LABELS

    entries = {}
    width = max(5, len(str(n - 1)))
    for i in range(n):
        utt_id = f"utt-{i:0{width}d}"
        child_seed = seed * _MIX + i
        if mode == "transcript":
            rng = random.Random(child_seed)
            length = rng.randint(min_len, max_len)
            text = " ".join(rng.choice(vocab) for _ in range(length))
        else:
            text = serialize(random_tree(child_seed, max_depth, intents, slots, vocab))
        entries[utt_id] = CorpusEntry(text)
    return Corpus(system_id, entries)


def corrupt(
    corpus: Corpus,
    spec: CorruptionSpec,
    system_id: str,
    vocab: list | None = None,
) -> Corpus:
    """Simulate one imperfect system by corrupting a corpus token-wise.

    The substitution/insertion vocabulary defaults to the corpus's own
    non-tag tokens. Substitutions always pick a word different from the
    original (when the vocabulary allows it).
    """
    if vocab is None:
        words = {
            t.surface
            for e in corpus.entries.values()
            for t in tokenize(e.text)
            if t.role is TagRole.WORD
        }
        vocab = sorted(words)
    else:
        vocab = list(vocab)

    entries = {}
    for index, (utt_id, entry) in enumerate(corpus.entries.items()):
        rng = random.Random(spec.seed * _MIX + index)
        out = []
        for tag in tokenize(entry.text):
            tok = tag.surface
            if spec.protect_brackets and tag.role is not TagRole.WORD:
                out.append(tok)
                continue
            u = rng.random()
            if u < spec.sub_rate:
                pool = [w for w in vocab if w != tok] if tok in vocab else vocab
                if pool:
                    out.append(rng.choice(pool))
                else:
                    out.append(tok)
            elif u < spec.sub_rate + spec.del_rate:
                pass
            elif u < spec.sub_rate + spec.del_rate + spec.ins_rate:
                out.append(tok)
                if vocab:
                    out.append(rng.choice(vocab))
            else:
                out.append(tok)
        entries[utt_id] = CorpusEntry(" ".join(out))
    return Corpus(system_id, entries)


def run_combination_experiment(
    n_utts: int,
    n_systems: int,
    corruption: CorruptionSpec,
    vote_config: VoteConfig = DEFAULT_VOTE,
    mode: str = "transcript",
    vocab: list | None = None,
    max_depth: int = 3,
    fallback_index: int = 0,
) -> ExperimentReport:
    """Generate, corrupt, combine, and score.

    References use ``corruption.seed``; system i (1-based) is corrupted
    with seed ``corruption.seed + i``, so system errors are mutually
    independent. Parse mode combines tag-token sequences and falls back
    on invalid votes; both modes report EM and pooled WER.
    """
    if n_systems < 2:
        raise InvalidParams(f"need at least 2 systems, got {n_systems}")
    vocab = list(vocab) if vocab is not None else WORD_VOCAB

    refs = gen_reference_corpus(
        corruption.seed, n_utts, mode, vocab=vocab, max_depth=max_depth
    )
    systems = []
    for i in range(1, n_systems + 1):
        sys_spec = replace(corruption, seed=corruption.seed + i)
        systems.append(corrupt(refs, sys_spec, f"sys{i:02d}", vocab=vocab))

    bundles = join_systems(systems, refs, policy="strict", opts=DEFAULT_NORM)

    combined_entries = {}
    combined_texts = []
    fell_back = [] if mode == "parse" else None
    for b in bundles:
        if mode == "parse":
            res = combine_parses(list(b.per_system), vote_config, fallback_index)
            text = res.text
            fell_back.append(res.fell_back)
        else:
            text = " ".join(combine(list(b.per_system), vote_config))
        combined_texts.append(text)
        combined_entries[b.utterance_id] = CorpusEntry(text)
    combined_corpus = Corpus("combined", combined_entries)

    scores = build_report(
        bundles,
        system_ids=[c.system_id for c in systems],
        compute_em=True,
        compute_wer=True,
        combined_texts=combined_texts,
        fell_back=fell_back,
    )

    config = {
        "n_utterances": n_utts,
        "n_systems": n_systems,
        "mode": mode,
        "sub_rate": corruption.sub_rate,
        "del_rate": corruption.del_rate,
        "ins_rate": corruption.ins_rate,
        "protect_brackets": corruption.protect_brackets,
        "seed": corruption.seed,
        "system_seeds": [corruption.seed + i for i in range(1, n_systems + 1)],
        "alpha": vote_config.alpha,
        "null_confidence": vote_config.null_confidence,
        "fallback_index": fallback_index,
        "vocab_size": len(vocab),
        "max_depth": max_depth,
    }
    return ExperimentReport(config, scores, refs, tuple(systems), combined_corpus)
