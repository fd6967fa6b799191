"""Corpus ingestion, multi-system joining, and report serialization.

Two hypothesis file formats:

* JSONL (primary): one object per line with ``id`` and ``text``, plus an
  optional ``conf`` array of per-token confidences in [0, 1].
* TSV: ``id<TAB>text[<TAB>conf1 conf2 ...]``; ``#``-prefixed lines are
  comments.

Reports are written as JSON (stable field order, 4-decimal fixed
precision plus exact ``num/den`` rationals) or as a TSV table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import (
    ConfidenceLengthMismatch,
    DuplicateId,
    InvalidParams,
    IoError,
    MalformedLine,
    MissingField,
    MissingHypothesis,
)
from .metrics import EvalReport, SystemScore, UtteranceDetail
from .rover import Hypothesis
from .textnorm import DEFAULT_NORM, NormalizationOptions, normalize

__all__ = [
    "NormalizationOptions",
    "normalize",
    "CorpusEntry",
    "Corpus",
    "UtteranceBundle",
    "load_corpus",
    "write_corpus",
    "join_systems",
    "write_report",
    "read_report",
    "format_report_json",
    "format_report_tsv",
]

FORMATS = ("jsonl", "tsv")


@dataclass(frozen=True)
class CorpusEntry:
    text: str
    confidences: tuple[float, ...] | None = None


@dataclass(frozen=True, eq=False)
class Corpus:
    """All of one system's outputs, keyed by utterance id."""

    system_id: str
    entries: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, Corpus)
            and self.system_id == other.system_id
            and self.entries == other.entries
        )

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class UtteranceBundle:
    """One utterance's hypotheses across all systems, in declared order."""

    utterance_id: str
    per_system: tuple[Hypothesis, ...]
    reference: str | None = None


def _check_conf(conf, path, line_no, utt_id, n_tokens):
    if not isinstance(conf, (list, tuple)):
        raise MalformedLine(path, line_no, "conf must be an array of numbers")
    vals = []
    for c in conf:
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise MalformedLine(path, line_no, f"confidence is not a number: {c!r}")
        if not 0.0 <= c <= 1.0:
            raise MalformedLine(path, line_no, f"confidence outside [0, 1]: {c!r}")
        vals.append(float(c))
    if len(vals) != n_tokens:
        raise ConfidenceLengthMismatch(path, line_no, utt_id, len(vals), n_tokens)
    return tuple(vals)


def load_corpus(path, fmt: str = "jsonl", system_id: str | None = None) -> Corpus:
    """Load a hypothesis/reference corpus file.

    ``system_id`` defaults to the file's stem. Duplicate ids, missing
    fields and malformed lines are reported with line numbers.
    """
    if fmt not in FORMATS:
        raise InvalidParams(f"unknown corpus format {fmt!r} (expected jsonl or tsv)")
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err

    entries: dict[str, CorpusEntry] = {}
    seen_line: dict[str, int] = {}
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        if fmt == "tsv" and line.lstrip().startswith("#"):
            continue
        if fmt == "jsonl":
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise MalformedLine(path, line_no, f"bad JSON: {err.msg}") from err
            if not isinstance(obj, dict):
                raise MalformedLine(path, line_no, "line is not a JSON object")
            for fld in ("id", "text"):
                if fld not in obj:
                    raise MissingField(path, line_no, fld)
                if not isinstance(obj[fld], str):
                    raise MalformedLine(path, line_no, f"{fld!r} must be a string")
            utt_id, text = obj["id"], obj["text"]
            conf = obj.get("conf")
        else:
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise MalformedLine(
                    path, line_no, f"expected 2 or 3 tab-separated fields, got {len(fields)}"
                )
            utt_id, text = fields[0], fields[1]
            if not utt_id:
                raise MissingField(path, line_no, "id")
            conf = None
            if len(fields) == 3 and fields[2].strip():
                try:
                    conf = [float(x) for x in fields[2].split()]
                except ValueError as err:
                    raise MalformedLine(path, line_no, f"bad confidence: {err}") from err
        if utt_id in seen_line:
            raise DuplicateId(path, utt_id, seen_line[utt_id], line_no)
        seen_line[utt_id] = line_no
        confidences = None
        if conf is not None:
            confidences = _check_conf(conf, path, line_no, utt_id, len(text.split()))
        entries[utt_id] = CorpusEntry(text, confidences)

    return Corpus(system_id if system_id is not None else path.stem, entries)


def write_corpus(corpus: Corpus, path, fmt: str = "jsonl") -> None:
    """Write a corpus; ``load_corpus`` of the result round-trips exactly."""
    if fmt not in FORMATS:
        raise InvalidParams(f"unknown corpus format {fmt!r} (expected jsonl or tsv)")
    lines = []
    for utt_id, entry in corpus.entries.items():
        if fmt == "jsonl":
            obj = {"id": utt_id, "text": entry.text}
            if entry.confidences is not None:
                obj["conf"] = list(entry.confidences)
            lines.append(json.dumps(obj, ensure_ascii=False))
        else:
            if "\t" in entry.text or "\n" in entry.text or "\t" in utt_id:
                raise InvalidParams(
                    f"{utt_id!r}: text with tabs/newlines is not representable "
                    "in tsv; write jsonl instead"
                )
            fields = [utt_id, entry.text]
            if entry.confidences is not None:
                fields.append(" ".join(repr(c) for c in entry.confidences))
            lines.append("\t".join(fields))
    _write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def join_systems(
    corpora: list[Corpus],
    references: Corpus | None = None,
    policy: str = "strict",
    opts: NormalizationOptions = DEFAULT_NORM,
) -> list[UtteranceBundle]:
    """Join system corpora (and optionally references) by utterance id.

    The id universe is the reference corpus when given, else the union of
    all system ids. Under ``strict`` every system must cover every id;
    under ``allow_missing`` absent hypotheses become empty token
    sequences. Hypothesis tokens are the whitespace fields of the
    ``opts``-normalized text. Bundles come back sorted by id, so reports
    are independent of input file line order.
    """
    if not corpora:
        raise InvalidParams("need at least one system corpus")
    if policy not in ("strict", "allow_missing"):
        raise InvalidParams(f"unknown join policy {policy!r}")

    if references is not None:
        universe = set(references.entries)
    else:
        universe = set()
        for c in corpora:
            universe.update(c.entries)

    bundles = []
    for utt_id in sorted(universe):
        hyps = []
        for idx, c in enumerate(corpora):
            entry = c.entries.get(utt_id)
            if entry is None:
                if policy == "strict":
                    raise MissingHypothesis(c.system_id, utt_id)
                # empty token sequence with (vacuously complete) empty
                # confidences, so absent systems never block weighted voting
                hyps.append(Hypothesis(utt_id, (), (), system_index=idx))
                continue
            tokens = tuple(normalize(entry.text, opts).split())
            hyps.append(Hypothesis(utt_id, tokens, entry.confidences, system_index=idx))
        ref = references.entries[utt_id].text if references is not None else None
        bundles.append(UtteranceBundle(utt_id, tuple(hyps), ref))
    return bundles


# --- report serialization ------------------------------------------------------

def _frac_json(name: str, value: Fraction | None) -> list[str]:
    if value is None:
        return [f'"{name}": null', f'"{name}_exact": null']
    return [
        f'"{name}": {float(value):.4f}',
        f'"{name}_exact": {json.dumps(str(value))}',
    ]


def _row_json(row: SystemScore) -> str:
    parts = [
        f'"system_id": {json.dumps(row.system_id, ensure_ascii=False)}',
        f'"n": {row.n_utterances}',
    ]
    parts += _frac_json("em", row.em)
    parts += _frac_json("wer", row.wer)
    return "{" + ", ".join(parts) + "}"


def _utt_json(u: UtteranceDetail) -> str:
    parts = [
        f'"id": {json.dumps(u.utterance_id, ensure_ascii=False)}',
        f'"system_em": {json.dumps(None if u.system_em is None else list(u.system_em))}',
        f'"combined_em": {json.dumps(u.combined_em)}',
        f'"fell_back": {json.dumps(u.fell_back)}',
    ]
    return "{" + ", ".join(parts) + "}"


def format_report_json(report: EvalReport, config: dict | None = None) -> str:
    """Render a report with stable field order and fixed 4-decimal numbers.

    json.dumps cannot emit fixed-precision number literals (``0.7500``),
    so the small fixed schema is rendered by hand. ``config`` prepends an
    experiment-configuration echo (used by the synthetic harness).
    """
    lines = ["{"]
    if config is not None:
        lines.append(f'  "config": {json.dumps(config, sort_keys=True)},')
    lines.append('  "systems": [')
    for i, row in enumerate(report.systems):
        comma = "," if i + 1 < len(report.systems) else ""
        lines.append(f"    {_row_json(row)}{comma}")
    lines.append("  ],")
    if report.combined is None:
        lines.append('  "combined": null,')
    else:
        lines.append(f'  "combined": {_row_json(report.combined)},')
    lines.append('  "utterances": [')
    for i, u in enumerate(report.utterances):
        comma = "," if i + 1 < len(report.utterances) else ""
        lines.append(f"    {_utt_json(u)}{comma}")
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_report_tsv(report: EvalReport) -> str:
    """Flat per-system table; utterance details are JSON-only."""
    def cell(v):
        return "" if v is None else f"{float(v):.4f}"

    def cell_exact(v):
        return "" if v is None else str(v)

    lines = ["system_id\tn\tem\tem_exact\twer\twer_exact"]
    rows = list(report.systems)
    if report.combined is not None:
        rows.append(report.combined)
    for row in rows:
        lines.append(
            "\t".join(
                [
                    row.system_id,
                    str(row.n_utterances),
                    cell(row.em),
                    cell_exact(row.em),
                    cell(row.wer),
                    cell_exact(row.wer),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, path, fmt: str = "json") -> None:
    if fmt == "json":
        _write_text(path, format_report_json(report))
    elif fmt == "tsv":
        _write_text(path, format_report_tsv(report))
    else:
        raise InvalidParams(f"unknown report format {fmt!r} (expected json or tsv)")


def _parse_row(obj) -> SystemScore:
    return SystemScore(
        system_id=obj["system_id"],
        n_utterances=obj["n"],
        em=None if obj.get("em_exact") is None else Fraction(obj["em_exact"]),
        wer=None if obj.get("wer_exact") is None else Fraction(obj["wer_exact"]),
    )


def read_report(path) -> EvalReport:
    """Reparse a JSON report; the exact rational fields are authoritative,
    so the result equals the report that was written."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    systems = tuple(_parse_row(r) for r in obj["systems"])
    combined = None if obj.get("combined") is None else _parse_row(obj["combined"])
    utterances = tuple(
        UtteranceDetail(
            utterance_id=u["id"],
            system_em=None if u.get("system_em") is None else tuple(u["system_em"]),
            combined_em=u.get("combined_em"),
            fell_back=u.get("fell_back"),
        )
        for u in obj.get("utterances", [])
    )
    return EvalReport(systems, combined, utterances)


def _write_text(path, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err
