"""
Combining classifiers
=====================

Five streams of bracket decisions, combined by several voting rules.
"""

import random

from chunkvote import combine

rng = random.Random(1)
gold = [rng.choice(["O-OPEN", "O-NONE"]) for _ in range(400)]


def noisy(error_rate):
    flip = {"O-OPEN": "O-NONE", "O-NONE": "O-OPEN"}
    return [flip[g] if rng.random() < error_rate else g for g in gold]


rates = [0.04, 0.06, 0.08, 0.10, 0.12]
tuning = [combine.OutputStream(f"c{i}", noisy(r)) for i, r in enumerate(rates)]

for method in combine.VOTING_METHODS:
    weights = None if method == "majority" else combine.estimate_weights(tuning, gold, method)
    result = combine.combine_stream(tuning, method, weights=weights)
    accuracy = sum(a == b for a, b in zip(result.tags, gold)) / len(gold)
    print(f"{method:16s} {100 * accuracy:6.2f}")

# per-classifier statistics that the weighted votes draw on
print()
print(combine.format_weights(combine.estimate_weights(tuning, gold, "tagprecision")))

# stacking: a second-level learner reads the five tags as features
stacker = combine.train_stacker(tuning, gold, "stack-ib1ig-tags", k=3)
result = combine.combine_stream(tuning, "stack-ib1ig-tags", stacker=stacker)
print("stacked accuracy:", sum(a == b for a, b in zip(result.tags, gold)) / len(gold))
