#!/usr/bin/env python3
# Walkthrough: ROVER combination of several systems' outputs.
#
# Hypotheses are progressively aligned into a word transition network
# (one correspondence set per output position, NULL marking absence),
# then each set votes.

from slukit import rover

outputs = [
    "set an alarm for nine am",   # best system first: ties break toward it
    "set an alarm for five am",
    "set the alarm for nine am",
    "set an alarm for nine",
]
hyps = [
    rover.Hypothesis("utt-1", tuple(s.split()), None, system_index=i)
    for i, s in enumerate(outputs)
]


def show(wtn):
    for k, cs in enumerate(wtn.sets):
        cands = ", ".join(
            f"{'NULL' if tok is None else tok}:{c.count}"
            for tok, c in cs.candidates.items()
        )
        print(f"  set {k}: {{{cands}}}")


# --- progressive construction --------------------------------------------

wtn = rover.wtn_from_hypothesis(hyps[0])
print("network after system 0:")
show(wtn)
for h in hyps[1:]:
    wtn = rover.align_into_wtn(wtn, h)
    print(f"\nnetwork after system {h.system_index}:")
    show(wtn)

# Counts in every set always sum to the number of systems aligned so far.
print("\ncount conservation:", all(s.total_count == wtn.num_systems for s in wtn.sets))

# --- voting ----------------------------------------------------------------

voted = rover.vote(wtn)
print("voted tokens:", " ".join(voted))
print("one-call equivalent:", " ".join(rover.combine(hyps)))

# A NULL majority emits nothing: system 4's missing "am" above was outvoted,
# while a majority NULL would have deleted the position instead.

# --- combining linearized parses -------------------------------------------

parses = [
    "[IN:CREATE_ALARM [SL:DATE_TIME nine am ] ]",
    "[IN:CREATE_ALARM [SL:DATE_TIME nine am ] ]",
    "[IN:CREATE_ALARM [SL:DATE_TIME five am ] ]",
]
phyps = [rover.Hypothesis("utt-2", tuple(s.split()), None, i) for i, s in enumerate(parses)]
res = rover.combine_parses(phyps)
print("\ncombined parse:", res.text)
print("valid:", res.valid, "fell_back:", res.fell_back)

# When the vote breaks the bracket structure, the designated fallback
# system's parse is returned instead (flagged, so reports can count it).
broken = [
    "[IN:A b ]",   # fallback target (index 0)
    "[IN:A b",
    "[IN:A b",
]
bhyps = [rover.Hypothesis("utt-3", tuple(s.split()), None, i) for i, s in enumerate(broken)]
res = rover.combine_parses(bhyps, fallback_index=0)
print("\nvote dropped a close bracket -> fell back:", res)
