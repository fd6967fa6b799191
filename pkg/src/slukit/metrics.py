"""Evaluation metrics: edit-distance alignment, WER, and exact match.

WER uses the standard unit-cost alignment (substitution = deletion =
insertion = 1) with a fixed backtrace preference (Match > Substitute >
Delete > Insert) so alignments, not just counts, are reproducible.
Corpus WER pools errors over pooled reference length. Accuracies are
kept as exact rationals; convert with ``float()`` when needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import EmptyCorpus, EmptyReference, EmptyReferencePool
from .textnorm import DEFAULT_NORM, NormalizationOptions, normalize

MATCH = "match"
SUB = "sub"
DEL = "del"
INS = "ins"


@dataclass(frozen=True)
class EditOp:
    """One alignment step; ``hyp``/``ref`` hold the tokens involved (None
    on the side an op does not touch)."""

    kind: str
    hyp: str | None
    ref: str | None


@dataclass(frozen=True)
class AlignmentResult:
    ops: tuple[EditOp, ...]
    num_sub: int
    num_del: int
    num_ins: int
    ref_len: int

    @property
    def num_match(self) -> int:
        return self.ref_len - self.num_sub - self.num_del

    @property
    def num_errors(self) -> int:
        return self.num_sub + self.num_del + self.num_ins

    @property
    def hyp_len(self) -> int:
        return self.num_match + self.num_sub + self.num_ins


def edit_align(hyp: Sequence[str], ref: Sequence[str]) -> AlignmentResult:
    """Minimal-cost alignment of a hypothesis against a reference.

    Deletions are reference tokens absent from the hypothesis; insertions
    are hypothesis tokens absent from the reference. Either side may be
    empty. Ties in the backtrace prefer Match > Sub > Del > Ins.
    """
    nr, nh = len(ref), len(hyp)
    # dist[i][j]: cost of aligning ref[:i] with hyp[:j]
    dist = [[0] * (nh + 1) for _ in range(nr + 1)]
    for i in range(1, nr + 1):
        dist[i][0] = i
    for j in range(1, nh + 1):
        dist[0][j] = j
    for i in range(1, nr + 1):
        row, prev = dist[i], dist[i - 1]
        r_tok = ref[i - 1]
        for j in range(1, nh + 1):
            diag = prev[j - 1] + (0 if r_tok == hyp[j - 1] else 1)
            row[j] = min(diag, prev[j] + 1, row[j - 1] + 1)

    ops = []
    n_sub = n_del = n_ins = 0
    i, j = nr, nh
    while i > 0 or j > 0:
        cur = dist[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and cur == dist[i - 1][j - 1]:
            ops.append(EditOp(MATCH, hyp[j - 1], ref[i - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and cur == dist[i - 1][j - 1] + 1 and ref[i - 1] != hyp[j - 1]:
            ops.append(EditOp(SUB, hyp[j - 1], ref[i - 1]))
            n_sub += 1
            i, j = i - 1, j - 1
        elif i > 0 and cur == dist[i - 1][j] + 1:
            ops.append(EditOp(DEL, None, ref[i - 1]))
            n_del += 1
            i -= 1
        else:
            ops.append(EditOp(INS, hyp[j - 1], None))
            n_ins += 1
            j -= 1
    ops.reverse()
    return AlignmentResult(tuple(ops), n_sub, n_del, n_ins, nr)


def wer(hyp: Sequence[str], ref: Sequence[str]) -> Fraction:
    """(sub + del + ins) / reference length. May exceed 1."""
    if not ref:
        if not hyp:
            return Fraction(0)
        raise EmptyReference("WER is undefined against an empty reference")
    res = edit_align(hyp, ref)
    return Fraction(res.num_errors, res.ref_len)


def exact_match(hyp: str, ref: str, norm: NormalizationOptions = DEFAULT_NORM) -> bool:
    return normalize(hyp, norm) == normalize(ref, norm)


def em_accuracy(pairs, norm: NormalizationOptions = DEFAULT_NORM) -> Fraction:
    """Exact mean of exact-match indicators over (hyp, ref) string pairs."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("cannot average over zero utterances")
    hits = sum(1 for h, r in pairs if exact_match(h, r, norm))
    return Fraction(hits, len(pairs))


def corpus_wer(pairs) -> Fraction:
    """Pooled WER: total errors over total reference tokens (not a mean of
    per-utterance rates)."""
    errors = 0
    ref_total = 0
    for hyp, ref in pairs:
        res = edit_align(hyp, ref)
        errors += res.num_errors
        ref_total += res.ref_len
    if ref_total == 0:
        raise EmptyReferencePool("no reference tokens to pool over")
    return Fraction(errors, ref_total)


# --- report assembly ---------------------------------------------------------

@dataclass(frozen=True)
class SystemScore:
    """One row of an evaluation report (a single system, or the combination)."""

    system_id: str
    n_utterances: int
    em: Fraction | None
    wer: Fraction | None


@dataclass(frozen=True)
class UtteranceDetail:
    utterance_id: str
    system_em: tuple[bool, ...] | None = None
    combined_em: bool | None = None
    fell_back: bool | None = None


@dataclass(frozen=True)
class EvalReport:
    systems: tuple[SystemScore, ...]
    combined: SystemScore | None = None
    utterances: tuple[UtteranceDetail, ...] = ()


def build_report(
    bundles,
    system_ids: Sequence[str],
    compute_em: bool = True,
    compute_wer: bool = True,
    em_norm: NormalizationOptions = DEFAULT_NORM,
    token_norm: NormalizationOptions = DEFAULT_NORM,
    combined_texts: Sequence[str] | None = None,
    fell_back: Sequence[bool] | None = None,
    combined_id: str = "combined",
) -> EvalReport:
    """Score every system (and optionally a combined output) over bundles.

    ``bundles`` are utterance bundles with a reference; hypothesis tokens
    are taken from the bundles as-is, references are tokenized here with
    ``token_norm``. EM always re-normalizes both sides with ``em_norm``.
    """
    bundles = list(bundles)
    if not bundles:
        raise EmptyCorpus("no utterances to evaluate")
    n_sys = len(system_ids)
    n = len(bundles)

    ref_texts = []
    ref_tokens = []
    for b in bundles:
        if b.reference is None:
            raise EmptyCorpus(f"utterance {b.utterance_id!r} has no reference")
        ref_texts.append(b.reference)
        ref_tokens.append(tuple(normalize(b.reference, token_norm).split()))

    em_flags = [[False] * n for _ in range(n_sys)]
    systems = []
    for s in range(n_sys):
        hyp_texts = [" ".join(b.per_system[s].tokens) for b in bundles]
        em = None
        if compute_em:
            for u in range(n):
                em_flags[s][u] = exact_match(hyp_texts[u], ref_texts[u], em_norm)
            em = Fraction(sum(em_flags[s]), n)
        w = None
        if compute_wer:
            w = corpus_wer(
                (b.per_system[s].tokens, ref_tokens[u])
                for u, b in enumerate(bundles)
            )
        systems.append(SystemScore(system_ids[s], n, em, w))

    combined = None
    combined_em_flags = None
    if combined_texts is not None:
        em = None
        if compute_em:
            combined_em_flags = [
                exact_match(combined_texts[u], ref_texts[u], em_norm) for u in range(n)
            ]
            em = Fraction(sum(combined_em_flags), n)
        w = None
        if compute_wer:
            w = corpus_wer(
                (tuple(normalize(combined_texts[u], token_norm).split()), ref_tokens[u])
                for u in range(n)
            )
        combined = SystemScore(combined_id, n, em, w)

    utterances = []
    if compute_em:
        for u, b in enumerate(bundles):
            utterances.append(
                UtteranceDetail(
                    utterance_id=b.utterance_id,
                    system_em=tuple(em_flags[s][u] for s in range(n_sys)),
                    combined_em=None if combined_em_flags is None else combined_em_flags[u],
                    fell_back=None if fell_back is None else fell_back[u],
                )
            )

    return EvalReport(tuple(systems), combined, tuple(utterances))
