#!/usr/bin/env python3
# Walkthrough: edit alignment, word error rate, exact match.

from slukit import metrics
from slukit.textnorm import NormalizationOptions

# --- minimal-cost alignment ----------------------------------------------

ref = "set an alarm for nine am".split()
hyp = "set the alarm for nine".split()

res = metrics.edit_align(hyp, ref)
print("alignment (hyp vs ref):")
for op in res.ops:
    print(f"  {op.kind:<6} hyp={op.hyp or '-':<6} ref={op.ref or '-'}")
print(f"sub={res.num_sub} del={res.num_del} ins={res.num_ins} over {res.ref_len} ref tokens")

# WER is an exact rational; it can exceed 1 when the hypothesis rambles.
print("\nWER:", metrics.wer(hyp, ref), "=", float(metrics.wer(hyp, ref)))
print("WER of a 4-token ramble vs 2-token ref:",
      float(metrics.wer("please play the music".split(), "play music".split())))

# --- corpus WER pools errors over pooled reference length ----------------

pairs = [
    ("set an alarm for ten".split(), "set an alarm for nine".split()),  # 1 error / 5
    ("play music".split(), "play music".split()),                       # 0 / 2
]
print("\ncorpus WER:", metrics.corpus_wer(pairs), "=", float(metrics.corpus_wer(pairs)))

# --- exact match on normalized strings ------------------------------------

a = "[IN:GET_WEATHER [SL:LOCATION boston ] ]"
b = "  [IN:GET_WEATHER   [SL:LOCATION boston ] ] "
print("\nwhitespace is collapsed before comparison:", metrics.exact_match(a, b))

print("case-sensitive by default:", metrics.exact_match("Boston", "boston"))
ci = NormalizationOptions(lowercase=True)
print("opt-in lowercase:", metrics.exact_match("Boston", "boston", ci))

parses = [
    ("[IN:A [SL:B x ] ]", "[IN:A [SL:B x ] ]"),
    ("[IN:A [SL:B y ] ]", "[IN:A [SL:B x ] ]"),
    ("[IN:A [SL:C x ] ]", "[IN:A [SL:B x ] ]"),
    ("[IN:A [SL:B x ] ]", "[IN:A [SL:B x ] ]"),
]
print("\nEM accuracy over 4 pairs:", metrics.em_accuracy(parses), "=", float(metrics.em_accuracy(parses)))
