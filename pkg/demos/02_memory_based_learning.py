"""
Memory-based learning
=====================

IB1-IG on a tiny categorical problem, then the same data in an IGTree.
"""

from chunkvote.features import Instance, stage1_features
from chunkvote import learner, synthetic

# the first feature predicts the class, the second is noise
data = [
    Instance(("red", "x"), "stop"),
    Instance(("red", "y"), "stop"),
    Instance(("green", "x"), "go"),
    Instance(("green", "y"), "go"),
    Instance(("amber", "x"), "stop"),
    Instance(("amber", "y"), "go"),
]
weights = learner.information_gain_weights(data)
print("information gain per feature:", [round(float(w), 4) for w in weights])

model = learner.ib1ig_train(data, k=1)
for query in [("red", "z"), ("green", "x"), ("blue", "y")]:
    label, scores = learner.ib1ig_classify(model, query)
    print(query, "->", label, scores)

# IGTree tests features in order of weight and stops when a branch is unseen
tree = learner.igtree_build(data)
print("igtree:", learner.igtree_classify(tree, ("blue", "y")))

# chunking instances: a window of 4 words and 4 tags on either side
sentence = synthetic.example_sentence()
print()
print("features for token 2:", stage1_features(sentence, 2))

# models round-trip through a checksummed text file
text = learner.write_container("ib1ig", learner.model_to_dict(model))
print(text.splitlines()[0])
