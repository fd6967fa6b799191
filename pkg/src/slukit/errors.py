"""Exception types shared across the toolkit.

Class names double as machine-readable error codes: the validator and the
CLI report ``type(err).__name__`` (e.g. ``UnbalancedBrackets``), and the
scripting bindings re-raise errors under the same names.
"""


class SlukitError(Exception):
    """Base class for all toolkit errors."""


class InvalidParams(SlukitError):
    """A caller-supplied parameter is out of range or inconsistent."""


# --- linearized-tree errors -------------------------------------------------

class ParseError(SlukitError):
    """Base class for linearized-tree structure errors."""


class EmptyInput(ParseError):
    """No tokens to parse, or an empty hypothesis list."""


class UnbalancedBrackets(ParseError):
    """An open tag without a matching close, or a stray close."""


class RootNotIntent(ParseError):
    """The sequence does not start with an intent tag, or has tokens
    outside the root's span."""


class MultipleRoots(ParseError):
    """A second top-level tag opens after the root has closed."""


class InvalidTree(ParseError):
    """A node violates the tree invariants (bad token text, bad label,
    or illegal nesting)."""


# --- metric preconditions ---------------------------------------------------

class MetricError(SlukitError):
    """Base class for metric precondition failures."""


class EmptyReference(MetricError):
    """WER requested against an empty reference with a non-empty hypothesis."""


class EmptyCorpus(MetricError):
    """Accuracy requested over zero utterance pairs."""


class EmptyReferencePool(MetricError):
    """Corpus WER requested with zero pooled reference tokens."""


# --- hypothesis-combination errors ------------------------------------------

class RoverError(SlukitError):
    """Base class for hypothesis-combination errors."""


class MixedUtteranceIds(RoverError):
    """Hypotheses passed to one combination carry different utterance ids."""


class MissingConfidences(RoverError):
    """Confidence-weighted voting requested but a hypothesis has no
    confidence scores."""


# --- corpus I/O errors --------------------------------------------------------

class CorpusError(SlukitError):
    """Base class for corpus file errors."""


class MalformedLine(CorpusError):
    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no
        self.reason = reason


class DuplicateId(CorpusError):
    def __init__(self, path, utterance_id, first_line, second_line):
        super().__init__(
            f"{path}: duplicate id {utterance_id!r} on lines "
            f"{first_line} and {second_line}"
        )
        self.path = path
        self.utterance_id = utterance_id
        self.first_line = first_line
        self.second_line = second_line


class MissingField(CorpusError):
    def __init__(self, path, line_no, field):
        super().__init__(f"{path}:{line_no}: missing required field {field!r}")
        self.path = path
        self.line_no = line_no
        self.field = field


class ConfidenceLengthMismatch(CorpusError):
    def __init__(self, path, line_no, utterance_id, n_conf, n_tokens):
        super().__init__(
            f"{path}:{line_no}: id {utterance_id!r} has {n_conf} confidences "
            f"for {n_tokens} tokens"
        )
        self.path = path
        self.line_no = line_no
        self.utterance_id = utterance_id


class MissingHypothesis(CorpusError):
    def __init__(self, system_id, utterance_id):
        super().__init__(
            f"system {system_id!r} has no hypothesis for utterance "
            f"{utterance_id!r}"
        )
        self.system_id = system_id
        self.utterance_id = utterance_id


class IoError(CorpusError):
    """A file could not be read or written."""
