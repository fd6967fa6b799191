#!/usr/bin/env python3
# Walkthrough: linearized parse trees.
#
# A task-oriented semantic parse is written as a flat token sequence in
# which intent and slot tags are single vocabulary tokens. This script
# tokenizes, parses, validates and regenerates such sequences.

from slukit import trees

# --- tokenization: whitespace fields, classified by shape ---------------

text = "[IN:CREATE_ALARM [SL:DATE_TIME for nine am ] ]"
print("input:", text)
for tok in trees.tokenize(text):
    print(f"  {tok.surface:<18} -> {tok.role.value}", f"({tok.label})" if tok.label else "")

# Plain transcripts pass through the same tokenizer: every field is a Word.
print("\ntranscript fields:", [t.role.value for t in trees.tokenize("set an alarm")])

# --- parsing builds the unique tree behind the sequence -----------------

tree = trees.parse(text)

def show(node, indent=0):
    pad = "  " * indent
    if node.kind is trees.NodeKind.TOKEN:
        print(f"{pad}{node.text}")
    else:
        print(f"{pad}{node.kind.value}:{node.label}")
        for child in node.children:
            show(child, indent + 1)

print("\ntree:")
show(tree.root)

# Intents nest inside slots (and vice versa):
nested = trees.parse("[IN:CREATE_REMINDER [SL:TODO [IN:CALL [SL:CONTACT mom ] ] ] ]")
print("\nnested tree:")
show(nested.root)

# --- serialization is the canonical inverse of parsing ------------------

print("\nround trip:", trees.serialize(tree) == text)
messy = "   [IN:A   b ]  "
print("canonicalized:", repr(trees.serialize(trees.parse(messy))))

# --- validation returns a verdict instead of raising --------------------

for s in ["[IN:A b ]", "[IN:X [SL:Y a ]", "[SL:Y a ]", "hello world", "[IN:A ] ]"]:
    print(f"validate({s!r}) = {trees.validate(s)}")

# --- random trees drive the property tests and synthetic corpora --------

t = trees.random_tree(
    seed=7,
    max_depth=3,
    intent_labels=["GET_WEATHER", "PLAY_MUSIC"],
    slot_labels=["LOCATION", "ARTIST"],
    word_vocab=["boston", "jazz", "tonight"],
)
print("\nrandom tree:", trees.serialize(t))
print("same seed, same tree:", t == trees.random_tree(7, 3, ["GET_WEATHER", "PLAY_MUSIC"], ["LOCATION", "ARTIST"], ["boston", "jazz", "tonight"]))
