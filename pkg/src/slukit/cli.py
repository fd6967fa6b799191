"""Command-line interface.

Subcommands: ``validate`` (per-line parse verdicts), ``eval`` (score
systems against references), ``combine`` (ROVER-combine hypothesis
files, best system first), ``simulate`` (synthetic combination
experiment), ``api`` (JSON op interface for bindings).

Exit codes: 0 success, 1 usage error, 2 data error (malformed or missing
files, inconsistent corpora), 3 metric precondition failure (e.g. empty
reference pool).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .api import run_api
from .corpus import (
    Corpus,
    CorpusEntry,
    format_report_json,
    join_systems,
    load_corpus,
    write_corpus,
    write_report,
)
from .errors import InvalidParams, IoError, MetricError, SlukitError
from .metrics import build_report
from .rover import VoteConfig, combine, combine_parses
from .synth import CorruptionSpec, run_combination_experiment
from .textnorm import NormalizationOptions
from .trees import validate


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this toolkit reserves 2 for
    data errors, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _detect_fmt(path, flag: str) -> str:
    if flag != "auto":
        return flag
    return "tsv" if Path(path).suffix == ".tsv" else "jsonl"


def _load_systems(paths, fmt_flag):
    """Load hypothesis files in flag order; system ids are file stems,
    deduplicated in order."""
    corpora = []
    seen = set()
    for p in paths:
        c = load_corpus(p, _detect_fmt(p, fmt_flag))
        sid = c.system_id
        k = 2
        while sid in seen:
            sid = f"{c.system_id}_{k}"
            k += 1
        seen.add(sid)
        corpora.append(Corpus(sid, c.entries))
    return corpora


def _norm_options(task: str, lowercase: bool):
    """Token- and EM-level normalization for a task.

    For transcripts (asr) lowercasing applies to the tokens themselves;
    for parses (slu) tags keep their case so structure checks still work,
    and lowercasing only affects the exact-match comparison.
    """
    if task == "asr":
        token_norm = NormalizationOptions(lowercase=lowercase)
    else:
        token_norm = NormalizationOptions()
    em_norm = NormalizationOptions(lowercase=lowercase)
    return token_norm, em_norm


def _print_table(report, out=None):
    out = out if out is not None else sys.stdout
    rows = list(report.systems)
    if report.combined is not None:
        rows.append(report.combined)
    width = max([len("system_id")] + [len(r.system_id) for r in rows])
    print(f"{'system_id':<{width}}  {'n':>6}  {'EM':>8}  {'WER':>8}", file=out)
    for r in rows:
        em = "-" if r.em is None else f"{float(r.em):.4f}"
        w = "-" if r.wer is None else f"{float(r.wer):.4f}"
        print(f"{r.system_id:<{width}}  {r.n_utterances:>6}  {em:>8}  {w:>8}", file=out)


# --- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    corpus = load_corpus(args.input, _detect_fmt(args.input, args.format))
    n_valid = 0
    for utt_id, entry in corpus.entries.items():
        verdict = validate(entry.text)
        if verdict == "Valid":
            n_valid += 1
        print(f"{utt_id}\t{verdict}")
    print(f"{n_valid}/{len(corpus.entries)} valid")
    return 0


def cmd_eval(args) -> int:
    refs = load_corpus(args.ref, _detect_fmt(args.ref, args.format))
    systems = _load_systems(args.hyp, args.format)
    token_norm, em_norm = _norm_options(args.task, args.lowercase)
    bundles = join_systems(systems, refs, policy=args.policy, opts=token_norm)
    report = build_report(
        bundles,
        system_ids=[c.system_id for c in systems],
        compute_em=args.task == "slu",
        compute_wer=True,
        em_norm=em_norm,
        token_norm=token_norm,
    )
    if args.report:
        fmt = "tsv" if Path(args.report).suffix == ".tsv" else "json"
        write_report(report, args.report, fmt)
    if not args.quiet:
        _print_table(report)
    return 0


def cmd_combine(args) -> int:
    systems = _load_systems(args.hyp, args.format)
    if not 0 <= args.fallback < len(systems):
        raise InvalidParams(
            f"--fallback {args.fallback} out of range for {len(systems)} systems"
        )
    refs = None
    if args.ref:
        refs = load_corpus(args.ref, _detect_fmt(args.ref, args.format))
    token_norm, em_norm = _norm_options(args.task, args.lowercase)
    bundles = join_systems(systems, refs, policy=args.policy, opts=token_norm)
    cfg = VoteConfig(alpha=args.alpha, null_confidence=args.null_confidence)

    combined_entries = {}
    combined_texts = []
    fell_back = [] if args.task == "slu" else None
    for b in bundles:
        if args.task == "slu":
            res = combine_parses(list(b.per_system), cfg, fallback_index=args.fallback)
            text = res.text
            fell_back.append(res.fell_back)
        else:
            text = " ".join(combine(list(b.per_system), cfg))
        combined_texts.append(text)
        combined_entries[b.utterance_id] = CorpusEntry(text)

    out_corpus = Corpus("combined", combined_entries)
    write_corpus(out_corpus, args.out, _detect_fmt(args.out, "auto"))

    if refs is not None:
        report = build_report(
            bundles,
            system_ids=[c.system_id for c in systems],
            compute_em=args.task == "slu",
            compute_wer=True,
            em_norm=em_norm,
            token_norm=token_norm,
            combined_texts=combined_texts,
            fell_back=fell_back,
        )
        if args.report:
            fmt = "tsv" if Path(args.report).suffix == ".tsv" else "json"
            write_report(report, args.report, fmt)
        if not args.quiet:
            _print_table(report)
            if fell_back is not None:
                print(f"fell back on {sum(fell_back)}/{len(fell_back)} utterances")
    return 0


def cmd_simulate(args) -> int:
    mode = "transcript" if args.task == "asr" else "parse"
    spec = CorruptionSpec(
        sub_rate=args.sub_rate,
        del_rate=args.del_rate,
        ins_rate=args.ins_rate,
        seed=args.seed,
        protect_brackets=args.task == "slu",
    )
    exp = run_combination_experiment(
        args.n, args.systems, spec, VoteConfig(alpha=args.alpha), mode=mode
    )

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_corpus(exp.references, out_dir / "references.jsonl")
    for sys_corpus in exp.systems:
        write_corpus(sys_corpus, out_dir / f"{sys_corpus.system_id}.jsonl")
    write_corpus(exp.combined, out_dir / "combined.jsonl")
    report_text = format_report_json(exp.scores, config=exp.config)
    summary = _simulate_summary(exp, mode)
    try:
        (out_dir / "report.json").write_text(report_text, encoding="utf-8")
        (out_dir / "summary.txt").write_text(summary, encoding="utf-8")
    except OSError as err:
        raise IoError(f"cannot write into {out_dir}: {err}") from err
    if not args.quiet:
        sys.stdout.write(summary)
    return 0


def _simulate_summary(exp, mode: str) -> str:
    import io

    buf = io.StringIO()
    cfg = exp.config
    print("synthetic combination experiment", file=buf)
    print(
        f"mode={cfg['mode']} n={cfg['n_utterances']} systems={cfg['n_systems']} "
        f"sub={cfg['sub_rate']} del={cfg['del_rate']} ins={cfg['ins_rate']} "
        f"seed={cfg['seed']} alpha={cfg['alpha']}",
        file=buf,
    )
    print("", file=buf)
    _print_table(exp.scores, out=buf)
    if mode == "parse":
        n = cfg["n_utterances"]
        print(f"fell back on {exp.fell_back_count}/{n} utterances", file=buf)
    return buf.getvalue()


def cmd_api(args) -> int:
    return run_api()


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slukit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"slukit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check linearized parses line by line")
    p.add_argument("--input", required=True, help="corpus file to validate")
    p.add_argument("--format", choices=("auto", "jsonl", "tsv"), default="auto")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="score hypothesis files against references")
    p.add_argument("--ref", required=True, help="reference corpus")
    p.add_argument("--hyp", required=True, action="append", help="hypothesis corpus (repeatable)")
    p.add_argument("--task", choices=("asr", "slu"), default="slu")
    p.add_argument("--lowercase", action="store_true", help="case-insensitive scoring")
    p.add_argument("--report", help="write a report file (.json or .tsv)")
    p.add_argument("--format", choices=("auto", "jsonl", "tsv"), default="auto")
    p.add_argument("--policy", choices=("strict", "allow_missing"), default="strict")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("combine", help="ROVER-combine hypothesis files (best first)")
    p.add_argument("--hyp", required=True, action="append", help="hypothesis corpus, quality order")
    p.add_argument("--task", choices=("asr", "slu"), default="slu")
    p.add_argument("--alpha", type=float, default=1.0, help="vote weight on counts vs confidence")
    p.add_argument("--null-confidence", type=float, default=0.0)
    p.add_argument("--fallback", type=int, default=0, help="system index used when a voted parse is invalid")
    p.add_argument("--out", required=True, help="combined corpus output file")
    p.add_argument("--ref", help="references; enables the report")
    p.add_argument("--report", help="write a report file (.json or .tsv)")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--format", choices=("auto", "jsonl", "tsv"), default="auto")
    p.add_argument("--policy", choices=("strict", "allow_missing"), default="strict")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_combine)

    p = sub.add_parser("simulate", help="synthetic corruption + combination experiment")
    p.add_argument("--n", type=int, required=True, help="number of utterances")
    p.add_argument("--systems", type=int, required=True, help="number of simulated systems")
    p.add_argument("--sub-rate", type=float, default=0.1)
    p.add_argument("--del-rate", type=float, default=0.0)
    p.add_argument("--ins-rate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--task", choices=("asr", "slu"), default="asr")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("api", help="JSON op interface on stdin/stdout (for bindings)")
    p.set_defaults(func=cmd_api)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MetricError as err:
        print(f"slukit: {type(err).__name__}: {err}", file=sys.stderr)
        return 3
    except InvalidParams as err:
        print(f"slukit: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except SlukitError as err:
        print(f"slukit: {type(err).__name__}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
