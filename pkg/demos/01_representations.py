"""
Chunk representations
=====================

One sentence, five ways of writing down the same base NPs.
"""

from chunkvote import chunkrepr, synthetic

sentence = synthetic.example_sentence()
n = len(sentence)
print(" ".join(sentence.words))
print("gold spans:", [(s.begin, s.end) for s in sentence.spans])
print()

# the four tagging schemes give one tag per token
for scheme in chunkrepr.TAGGING_SCHEMES:
    tags = chunkrepr.encode(sentence.spans, n, scheme)
    print(f"{scheme.value:5s}", " ".join(tags))

# O+C is two boolean streams: does a chunk open here, does one close here
opens, closes = chunkrepr.encode(sentence.spans, n, "O+C")
print("open ", " ".join("[" if o else "." for o in opens))
print("close", " ".join("]" if c else "." for c in closes))
print()

# every tagging scheme can be reduced to the same bracket streams
iob1 = chunkrepr.encode(sentence.spans, n, "IOB1")
assert chunkrepr.to_brackets(iob1, "IOB1") == (opens, closes)

# brackets are paired left to right, a later open replacing a pending one
print("paired:", [(s.begin, s.end) for s in chunkrepr.pair_brackets(opens, closes)])

# inconsistent tag sequences still decode: a stray I starts a chunk
print("repair:", chunkrepr.decode(["O", "I", "I", "O", "I"], "IOB2"))

# and any scheme converts to any other
print("IOB1 -> IOE1:", " ".join(chunkrepr.convert(iob1, "IOB1", "IOE1")))
