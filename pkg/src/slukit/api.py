"""Line-delimited JSON op interface (``slukit api``).

One request object per stdin line, one response per stdout line, in
order. This is the integration surface for language bindings: every op
delegates 1:1 to the core functions, and errors come back under their
core error names.

Request:  ``{"id": 3, "op": "wer", "args": {"hyp": [...], "ref": [...]}}``
Response: ``{"id": 3, "ok": true, "result": {...}}`` or
          ``{"id": 3, "ok": false, "error": "EmptyReference", "message": "..."}``
"""

from __future__ import annotations

import json
import sys

from . import __version__
from .errors import SlukitError
from .metrics import em_accuracy, wer
from .rover import Hypothesis, VoteConfig, combine, combine_parses
from .textnorm import NormalizationOptions, normalize
from .trees import NodeKind, ParseNode, ParseTree, parse, serialize


def tree_to_obj(node: ParseNode):
    """Plain-data view of a tree: ``[kind, label, children]`` with word
    leaves as bare strings."""
    if node.kind is NodeKind.TOKEN:
        return node.text
    kind = "intent" if node.kind is NodeKind.INTENT else "slot"
    return [kind, node.label, [tree_to_obj(c) for c in node.children]]


def obj_to_tree(obj) -> ParseNode:
    if isinstance(obj, str):
        return ParseNode(NodeKind.TOKEN, text=obj)
    if not (isinstance(obj, (list, tuple)) and len(obj) == 3):
        raise SlukitError(f"expected [kind, label, children] or a string, got {obj!r}")
    kind_name, label, children = obj
    kinds = {"intent": NodeKind.INTENT, "slot": NodeKind.SLOT}
    if kind_name not in kinds:
        raise SlukitError(f"unknown node kind {kind_name!r}")
    return ParseNode(kinds[kind_name], label=label, children=tuple(obj_to_tree(c) for c in children))


def _op_version(args):
    return {"version": __version__}


def _op_parse(args):
    tree = parse(args["text"])
    return {"tree": tree_to_obj(tree.root)}


def _op_serialize(args):
    node = obj_to_tree(args["tree"])
    return {"text": serialize(ParseTree(node))}


def _op_wer(args):
    hyp, ref = list(args["hyp"]), list(args["ref"])
    value = wer(hyp, ref)
    from .metrics import edit_align

    res = edit_align(hyp, ref)
    return {
        "wer": float(value),
        "wer_exact": str(value),
        "num_sub": res.num_sub,
        "num_del": res.num_del,
        "num_ins": res.num_ins,
        "ref_len": res.ref_len,
    }


def _op_em_accuracy(args):
    norm = NormalizationOptions(lowercase=bool(args.get("lowercase", False)))
    acc = em_accuracy([(p[0], p[1]) for p in args["pairs"]], norm)
    return {"em": float(acc), "em_exact": str(acc)}


def _op_combine(args):
    hyps = [
        Hypothesis("", tuple(toks), None, system_index=i)
        for i, toks in enumerate(args["token_lists"])
    ]
    cfg = VoteConfig(alpha=float(args.get("alpha", 1.0)))
    return {"tokens": combine(hyps, cfg)}


def _op_combine_parses(args):
    hyps = [
        Hypothesis("", tuple(normalize(text).split()), None, system_index=i)
        for i, text in enumerate(args["texts"])
    ]
    res = combine_parses(hyps, fallback_index=int(args.get("fallback_index", 0)))
    return {"text": res.text, "valid": res.valid, "fell_back": res.fell_back}


_OPS = {
    "version": _op_version,
    "parse": _op_parse,
    "serialize": _op_serialize,
    "wer": _op_wer,
    "em_accuracy": _op_em_accuracy,
    "combine": _op_combine,
    "combine_parses": _op_combine_parses,
}


def handle_request(line: str) -> dict:
    req_id = None
    try:
        req = json.loads(line)
        req_id = req.get("id")
        op = req.get("op")
        if op not in _OPS:
            raise SlukitError(f"unknown op {op!r}")
        result = _OPS[op](req.get("args", {}))
        return {"id": req_id, "ok": True, "result": result}
    except SlukitError as err:
        return {"id": req_id, "ok": False, "error": type(err).__name__, "message": str(err)}
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as err:
        return {
            "id": req_id,
            "ok": False,
            "error": "BadRequest",
            "message": f"{type(err).__name__}: {err}",
        }


def run_api(stdin=None, stdout=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        if not line.strip():
            continue
        resp = handle_request(line)
        stdout.write(json.dumps(resp, ensure_ascii=False) + "\n")
        stdout.flush()
    return 0
