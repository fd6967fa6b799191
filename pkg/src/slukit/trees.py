"""Linearized task-oriented parse trees.

A parse is written as a flat token sequence in which intent and slot tags
are single vocabulary tokens: ``[IN:GET_WEATHER [SL:LOCATION boston ] ]``.
Opens carry their label (``[IN:<LABEL>`` / ``[SL:<LABEL>``), the close
token is a bare ``]``, and everything else is a plain word. Intents nest
slots, slots nest intents, and both may hold word leaves.

Everything here is immutable and side-effect free; values can be shared
freely across threads.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    EmptyInput,
    InvalidParams,
    InvalidTree,
    MultipleRoots,
    ParseError,
    RootNotIntent,
    UnbalancedBrackets,
)

# Default charset for intent/slot labels. Pass a different compiled regex
# to tokenize/parse/validate to accept other label alphabets.
DEFAULT_LABEL_RE = re.compile(r"[A-Z0-9_]+")

_INTENT_PREFIX = "[IN:"
_SLOT_PREFIX = "[SL:"
CLOSE = "]"

_WS_RE = re.compile(r"\s")


class TagRole(Enum):
    INTENT_OPEN = "IntentOpen"
    SLOT_OPEN = "SlotOpen"
    CLOSE = "Close"
    WORD = "Word"


@dataclass(frozen=True)
class TagToken:
    """One whitespace-delimited field of a linearized parse, classified by shape."""

    surface: str
    role: TagRole

    @property
    def label(self) -> str:
        """Label of an open tag (empty string for Close/Word tokens)."""
        if self.role in (TagRole.INTENT_OPEN, TagRole.SLOT_OPEN):
            return self.surface[4:]
        return ""


class NodeKind(Enum):
    INTENT = "Intent"
    SLOT = "Slot"
    TOKEN = "Token"


# Child kinds each tag node admits. Intents nest slots, slots nest intents.
_ALLOWED_CHILDREN = {
    NodeKind.INTENT: (NodeKind.SLOT, NodeKind.TOKEN),
    NodeKind.SLOT: (NodeKind.INTENT, NodeKind.TOKEN),
}


@dataclass(frozen=True)
class ParseNode:
    """A node of a parse tree: an intent, a slot, or a word leaf.

    Invariants are enforced at construction; an instance that exists is
    well formed. Use the :func:`intent`, :func:`slot` and :func:`token`
    helpers rather than calling the constructor directly.
    """

    kind: NodeKind
    label: str = ""
    text: str = ""
    children: tuple[ParseNode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.kind is NodeKind.TOKEN:
            if self.children:
                raise InvalidTree("token nodes have no children")
            if self.label:
                raise InvalidTree("token nodes carry no label")
            if not self.text:
                raise InvalidTree("token text must be non-empty")
            if _WS_RE.search(self.text):
                raise InvalidTree(f"token text contains whitespace: {self.text!r}")
            if self.text.startswith("["):
                raise InvalidTree(f"token text may not start with '[': {self.text!r}")
            if self.text == CLOSE:
                raise InvalidTree("token text may not be ']'")
            return
        if self.text:
            raise InvalidTree(f"{self.kind.value} nodes carry no text")
        if not self.label:
            raise InvalidTree(f"{self.kind.value} node needs a non-empty label")
        if _WS_RE.search(self.label) or "[" in self.label or "]" in self.label:
            raise InvalidTree(f"malformed label: {self.label!r}")
        allowed = _ALLOWED_CHILDREN[self.kind]
        for child in self.children:
            if not isinstance(child, ParseNode):
                raise InvalidTree(f"child is not a ParseNode: {child!r}")
            if child.kind not in allowed:
                raise InvalidTree(
                    f"{child.kind.value} node cannot be a child of a "
                    f"{self.kind.value} node"
                )


def intent(label: str, children=()) -> ParseNode:
    return ParseNode(NodeKind.INTENT, label=label, children=tuple(children))


def slot(label: str, children=()) -> ParseNode:
    return ParseNode(NodeKind.SLOT, label=label, children=tuple(children))


def token(text: str) -> ParseNode:
    return ParseNode(NodeKind.TOKEN, text=text)


@dataclass(frozen=True)
class ParseTree:
    root: ParseNode

    def __post_init__(self):
        if not isinstance(self.root, ParseNode) or self.root.kind is not NodeKind.INTENT:
            raise InvalidTree("the root of a parse tree must be an intent")


def tokenize(text: str, label_re: re.Pattern = DEFAULT_LABEL_RE) -> list[TagToken]:
    """Split ``text`` on whitespace and classify each field by shape.

    Classification is total: fields that are not a well-formed open tag or
    the close bracket come back as Word tokens, so plain ASR transcripts
    pass through unchanged. Structure is *not* checked here.
    """
    tokens = []
    for fld in text.split():
        if fld == CLOSE:
            role = TagRole.CLOSE
        elif fld.startswith(_INTENT_PREFIX) and label_re.fullmatch(fld[4:]):
            role = TagRole.INTENT_OPEN
        elif fld.startswith(_SLOT_PREFIX) and label_re.fullmatch(fld[4:]):
            role = TagRole.SLOT_OPEN
        else:
            role = TagRole.WORD
        tokens.append(TagToken(fld, role))
    return tokens


def parse_tokens(tokens: list[TagToken]) -> ParseTree:
    """Build the unique tree whose pre-order linearization is ``tokens``.

    Raises EmptyInput, UnbalancedBrackets, RootNotIntent or MultipleRoots
    for structural faults, and InvalidTree when a node invariant is hit
    (word field starting with ``[``, intent directly under intent, ...).
    """
    if not tokens:
        raise EmptyInput("no tokens to parse")
    root = None
    stack = []  # (kind, label, children) frames for currently open tags
    for tok in tokens:
        if not stack:
            if root is not None:
                if tok.role in (TagRole.INTENT_OPEN, TagRole.SLOT_OPEN):
                    raise MultipleRoots(
                        f"second top-level tag after the root closed: {tok.surface!r}"
                    )
                if tok.role is TagRole.CLOSE:
                    raise UnbalancedBrackets("close bracket without an open tag")
                raise RootNotIntent(f"token outside the root's span: {tok.surface!r}")
            if tok.role is TagRole.INTENT_OPEN:
                stack.append((NodeKind.INTENT, tok.label, []))
            elif tok.role is TagRole.CLOSE:
                raise UnbalancedBrackets("close bracket without an open tag")
            else:
                raise RootNotIntent(
                    f"a parse must start with an intent tag, got {tok.surface!r}"
                )
        elif tok.role is TagRole.INTENT_OPEN:
            stack.append((NodeKind.INTENT, tok.label, []))
        elif tok.role is TagRole.SLOT_OPEN:
            stack.append((NodeKind.SLOT, tok.label, []))
        elif tok.role is TagRole.WORD:
            stack[-1][2].append(token(tok.surface))
        else:  # CLOSE
            kind, label, children = stack.pop()
            node = ParseNode(kind, label=label, children=tuple(children))
            if stack:
                stack[-1][2].append(node)
            else:
                root = node
    if stack:
        raise UnbalancedBrackets(f"{len(stack)} open tag(s) never closed")
    return ParseTree(root)


def parse(text: str, label_re: re.Pattern = DEFAULT_LABEL_RE) -> ParseTree:
    """tokenize + parse_tokens in one step."""
    return parse_tokens(tokenize(text, label_re))


def serialize(tree: ParseTree | ParseNode) -> str:
    """Canonical linearization: pre-order walk, fields joined by single spaces."""
    node = tree.root if isinstance(tree, ParseTree) else tree
    if not isinstance(node, ParseNode):
        raise InvalidTree(f"not a parse tree: {tree!r}")
    out = []
    _emit(node, out)
    return " ".join(out)


def _emit(node: ParseNode, out: list):
    if node.kind is NodeKind.TOKEN:
        out.append(node.text)
        return
    prefix = _INTENT_PREFIX if node.kind is NodeKind.INTENT else _SLOT_PREFIX
    out.append(prefix + node.label)
    for child in node.children:
        _emit(child, out)
    out.append(CLOSE)


def validate(text: str, label_re: re.Pattern = DEFAULT_LABEL_RE) -> str:
    """Verdict for a linearized parse: ``"Valid"`` or the parse error name.

    Never raises; the verdict string is the error class name, e.g.
    ``"UnbalancedBrackets"``.
    """
    try:
        parse(text, label_re)
    except ParseError as err:
        return type(err).__name__
    return "Valid"


def random_tree(
    seed: int,
    max_depth: int,
    intent_labels: list,
    slot_labels: list,
    word_vocab: list,
) -> ParseTree:
    """Deterministic random parse tree, for property tests and synthetic corpora.

    ``max_depth`` bounds the number of nested tag levels (word leaves do
    not count); ``max_depth=1`` yields a token-only or childless intent.
    """
    if max_depth < 1:
        raise InvalidParams(f"max_depth must be >= 1, got {max_depth}")
    if not intent_labels or not slot_labels or not word_vocab:
        raise InvalidParams("intent_labels, slot_labels and word_vocab must be non-empty")
    for lbl in list(intent_labels) + list(slot_labels):
        if not DEFAULT_LABEL_RE.fullmatch(lbl):
            raise InvalidParams(f"label does not match [A-Z0-9_]+: {lbl!r}")
    for w in word_vocab:
        if not w or _WS_RE.search(w) or w.startswith("[") or w == CLOSE:
            raise InvalidParams(f"word not usable as a token leaf: {w!r}")

    rng = random.Random(seed)

    def gen_intent(level):
        kids = []
        for _ in range(rng.randint(0, 3)):
            if level < max_depth and rng.random() < 0.4:
                kids.append(gen_slot(level + 1))
            else:
                kids.append(token(rng.choice(word_vocab)))
        return intent(rng.choice(intent_labels), kids)

    def gen_slot(level):
        kids = []
        for _ in range(rng.randint(1, 3)):
            if level < max_depth and rng.random() < 0.3:
                kids.append(gen_intent(level + 1))
            else:
                kids.append(token(rng.choice(word_vocab)))
        return slot(rng.choice(slot_labels), kids)

    return ParseTree(gen_intent(1))
