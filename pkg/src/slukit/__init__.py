"""slukit: evaluate and combine spoken semantic parsing outputs.

Core pieces: linearized intent/slot parse trees (`slukit.trees`),
WER/exact-match metrics (`slukit.metrics`), ROVER hypothesis combination
over word transition networks (`slukit.rover`), corpus file handling
(`slukit.corpus`), and a synthetic experiment harness (`slukit.synth`).
"""

__version__ = "0.1.0"

from .errors import SlukitError
from .metrics import (
    AlignmentResult,
    EvalReport,
    SystemScore,
    corpus_wer,
    edit_align,
    em_accuracy,
    exact_match,
    wer,
)
from .rover import (
    Hypothesis,
    VoteConfig,
    WordTransitionNetwork,
    align_into_wtn,
    build_wtn,
    combine,
    combine_parses,
    vote,
    wtn_from_hypothesis,
)
from .textnorm import NormalizationOptions, normalize
from .trees import (
    ParseNode,
    ParseTree,
    TagToken,
    intent,
    parse,
    parse_tokens,
    random_tree,
    serialize,
    slot,
    token,
    tokenize,
    validate,
)

__all__ = [
    "__version__",
    "SlukitError",
    "AlignmentResult",
    "EvalReport",
    "SystemScore",
    "corpus_wer",
    "edit_align",
    "em_accuracy",
    "exact_match",
    "wer",
    "Hypothesis",
    "VoteConfig",
    "WordTransitionNetwork",
    "align_into_wtn",
    "build_wtn",
    "combine",
    "combine_parses",
    "vote",
    "wtn_from_hypothesis",
    "NormalizationOptions",
    "normalize",
    "ParseNode",
    "ParseTree",
    "TagToken",
    "intent",
    "parse",
    "parse_tokens",
    "random_tree",
    "serialize",
    "slot",
    "token",
    "tokenize",
    "validate",
]
