"""ROVER hypothesis combination.

N system outputs are merged by progressive alignment into a word
transition network (WTN): an ordered list of correspondence sets, each
mapping candidate tokens to vote counts. A system that has no token at a
position contributes the distinguished NULL candidate (represented as
``None``). Voting then emits the best candidate per set; NULL winners
emit nothing.

Alignment of a hypothesis against the network uses unit costs (a set
*matches* a token when the token is already among its non-NULL
candidates) with the same backtrace preference as the WER alignment,
Match > Sub > Del > Ins, so combination is fully deterministic.
Combination is order-dependent: list systems best-first, since ties are
broken toward the earliest system.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptyInput, InvalidParams, MissingConfidences, MixedUtteranceIds
from .trees import validate

# The NULL candidate: "this system emitted nothing here".
NULL = None


@dataclass(frozen=True)
class Hypothesis:
    """One system's output for one utterance."""

    utterance_id: str
    tokens: tuple[str, ...]
    confidences: tuple[float, ...] | None = None
    system_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.confidences is not None:
            object.__setattr__(self, "confidences", tuple(self.confidences))
            if len(self.confidences) != len(self.tokens):
                raise InvalidParams(
                    f"{self.utterance_id!r}: {len(self.confidences)} confidences "
                    f"for {len(self.tokens)} tokens"
                )
        if self.system_index < 0:
            raise InvalidParams("system_index must be >= 0")


@dataclass(frozen=True)
class Candidate:
    count: int
    conf_sum: float
    min_system_index: int


@dataclass(frozen=True, eq=True, unsafe_hash=False)
class CorrespondenceSet:
    """Candidate tokens competing for one output position.

    Keys are token strings, plus ``None`` for NULL. Treat the mapping as
    immutable; alignment steps build new sets instead of mutating.
    """

    candidates: dict

    @property
    def total_count(self) -> int:
        return sum(c.count for c in self.candidates.values())

    def has_token(self, tok: str) -> bool:
        return tok in self.candidates

    def _added(self, tok, conf: float, system_index: int) -> "CorrespondenceSet":
        cands = dict(self.candidates)
        prev = cands.get(tok)
        if prev is None:
            cands[tok] = Candidate(1, conf, system_index)
        else:
            cands[tok] = Candidate(
                prev.count + 1,
                prev.conf_sum + conf,
                min(prev.min_system_index, system_index),
            )
        return CorrespondenceSet(cands)


@dataclass(frozen=True)
class WordTransitionNetwork:
    sets: tuple[CorrespondenceSet, ...]
    num_systems: int
    has_confidences: bool = False
    system_indices: tuple[int, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class VoteConfig:
    """Voting parameters.

    ``alpha`` weights vote counts against mean confidence; the default is
    frequency-only voting with NULL confidence 0. NULL winners always
    emit nothing (``drop_null`` documents this and must stay True).
    """

    alpha: float = 1.0
    null_confidence: float = 0.0
    drop_null: bool = True

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParams(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.null_confidence <= 1.0:
            raise InvalidParams(
                f"null_confidence must be in [0, 1], got {self.null_confidence}"
            )
        if not self.drop_null:
            raise InvalidParams("NULL winners never emit a token; drop_null must be True")


DEFAULT_VOTE = VoteConfig()


def wtn_from_hypothesis(hyp: Hypothesis) -> WordTransitionNetwork:
    """Trivial network of a single hypothesis: one set per token."""
    sets = []
    for i, tok in enumerate(hyp.tokens):
        conf = hyp.confidences[i] if hyp.confidences is not None else 0.0
        sets.append(CorrespondenceSet({tok: Candidate(1, conf, hyp.system_index)}))
    return WordTransitionNetwork(
        sets=tuple(sets),
        num_systems=1,
        has_confidences=hyp.confidences is not None,
        system_indices=(hyp.system_index,),
    )


def _align_grid(sets, toks):
    """DP table for set-vs-token alignment under unit costs."""
    m, n = len(sets), len(toks)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dist[i][0] = i
    for j in range(1, n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row, prev = dist[i], dist[i - 1]
        s = sets[i - 1]
        for j in range(1, n + 1):
            diag = prev[j - 1] + (0 if s.has_token(toks[j - 1]) else 1)
            row[j] = min(diag, prev[j] + 1, row[j - 1] + 1)
    return dist


def _align_cost_for_tests(wtn: WordTransitionNetwork, hyp: Hypothesis) -> int:
    """Minimum alignment cost only; lets tests cross-check the DP against
    an exhaustive oracle without reaching into align_into_wtn."""
    return _align_grid(wtn.sets, hyp.tokens)[len(wtn.sets)][len(hyp.tokens)]


def align_into_wtn(wtn: WordTransitionNetwork, hyp: Hypothesis) -> WordTransitionNetwork:
    """Align one more hypothesis into the network and merge its tokens.

    Minimal-cost global alignment of sets vs tokens: match costs 0 when
    the token is already a non-NULL candidate of the set, substitution
    costs 1, skipping a set (deletion) adds NULL to it, and an unmatched
    token (insertion) opens a new set padded with NULL for every
    previously aligned system.
    """
    sets, toks = wtn.sets, hyp.tokens
    m, n = len(sets), len(toks)
    dist = _align_grid(sets, toks)

    # Backtrace to a list of steps, preference Match > Sub > Del > Ins.
    steps = []  # ("pair", set_idx, tok_idx) | ("skip", set_idx) | ("new", tok_idx)
    i, j = m, n
    while i > 0 or j > 0:
        cur = dist[i][j]
        if i > 0 and j > 0 and sets[i - 1].has_token(toks[j - 1]) and cur == dist[i - 1][j - 1]:
            steps.append(("pair", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif (
            i > 0 and j > 0
            and cur == dist[i - 1][j - 1] + 1
            and not sets[i - 1].has_token(toks[j - 1])
        ):
            steps.append(("pair", i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and cur == dist[i - 1][j] + 1:
            steps.append(("skip", i - 1))
            i -= 1
        else:
            steps.append(("new", j - 1))
            j -= 1
    steps.reverse()

    def conf_of(tok_idx):
        return hyp.confidences[tok_idx] if hyp.confidences is not None else 0.0

    pad_min_index = min(wtn.system_indices, default=0)
    new_sets = []
    for step in steps:
        if step[0] == "pair":
            _, si, tj = step
            new_sets.append(sets[si]._added(toks[tj], conf_of(tj), hyp.system_index))
        elif step[0] == "skip":
            new_sets.append(sets[step[1]]._added(NULL, 0.0, hyp.system_index))
        else:
            tj = step[1]
            cands = {NULL: Candidate(wtn.num_systems, 0.0, pad_min_index)}
            new_sets.append(
                CorrespondenceSet(cands)._added(toks[tj], conf_of(tj), hyp.system_index)
            )

    return WordTransitionNetwork(
        sets=tuple(new_sets),
        num_systems=wtn.num_systems + 1,
        has_confidences=wtn.has_confidences and hyp.confidences is not None,
        system_indices=wtn.system_indices + (hyp.system_index,),
    )


def build_wtn(hyps: list[Hypothesis]) -> WordTransitionNetwork:
    """Progressively align a list of hypotheses (in the given order)."""
    if not hyps:
        raise EmptyInput("no hypotheses to combine")
    ids = {h.utterance_id for h in hyps}
    if len(ids) > 1:
        raise MixedUtteranceIds(f"hypotheses cover several utterances: {sorted(ids)}")
    wtn = wtn_from_hypothesis(hyps[0])
    for hyp in hyps[1:]:
        wtn = align_into_wtn(wtn, hyp)
    return wtn


def vote(wtn: WordTransitionNetwork, config: VoteConfig = DEFAULT_VOTE) -> list[str]:
    """Emit the best candidate of every correspondence set.

    score(w) = alpha * count(w)/num_systems + (1-alpha) * avg_conf(w).
    Ties prefer a non-NULL candidate, then the candidate first produced
    by the earliest system.
    """
    if config.alpha < 1.0 and not wtn.has_confidences:
        raise MissingConfidences(
            "confidence-weighted voting needs confidences from every system"
        )
    out = []
    num = wtn.num_systems
    for s in wtn.sets:
        best_tok = NULL
        best_key = None
        for tok, cand in s.candidates.items():
            if config.alpha == 1.0:
                score = cand.count / num
            else:
                if tok is NULL:
                    avg = config.null_confidence
                else:
                    avg = cand.conf_sum / cand.count
                score = config.alpha * (cand.count / num) + (1.0 - config.alpha) * avg
            key = (score, tok is not NULL, -cand.min_system_index)
            if best_key is None or key > best_key:
                best_key, best_tok = key, tok
        if best_tok is not NULL:
            out.append(best_tok)
    return out


def combine(hyps: list[Hypothesis], config: VoteConfig = DEFAULT_VOTE) -> list[str]:
    """Full combination: build the network, then vote."""
    return vote(build_wtn(hyps), config)


@dataclass(frozen=True)
class CombinedParse:
    text: str
    valid: bool
    fell_back: bool


def combine_parses(
    hyps: list[Hypothesis],
    config: VoteConfig = DEFAULT_VOTE,
    fallback_index: int = 0,
) -> CombinedParse:
    """Combine linearized parses, falling back when the vote breaks structure.

    Hypothesis tokens are tag tokens (bracket fields are atomic). When the
    voted sequence is not a well-formed parse, the designated fallback
    system's sequence is returned instead so downstream exact-match
    scoring always has a string to consume.
    """
    if not hyps:
        raise EmptyInput("no hypotheses to combine")
    if not 0 <= fallback_index < len(hyps):
        raise InvalidParams(
            f"fallback_index {fallback_index} out of range for {len(hyps)} systems"
        )
    voted = combine(hyps, config)
    text = " ".join(voted)
    if validate(text) == "Valid":
        return CombinedParse(text, valid=True, fell_back=False)
    fb_text = " ".join(hyps[fallback_index].tokens)
    return CombinedParse(fb_text, valid=validate(fb_text) == "Valid", fell_back=True)


__all__ = [
    "NULL",
    "Hypothesis",
    "Candidate",
    "CorrespondenceSet",
    "WordTransitionNetwork",
    "VoteConfig",
    "DEFAULT_VOTE",
    "CombinedParse",
    "wtn_from_hypothesis",
    "align_into_wtn",
    "build_wtn",
    "vote",
    "combine",
    "combine_parses",
]
