"""
Nested noun phrases
===================

Recognise NPs inside NPs by chunking, collapsing each chunk to its head,
and chunking again.
"""

from chunkvote import corpus, pipeline, synthetic
from chunkvote.evaluation import chunk_score

data = synthetic.nested_corpus(40, seed=2)
train, test = data[:32], data[32:]

# spans are stratified by height: 1 contains no other NP
sentence = train[0]
print(corpus.write_nested_file(train[:1]))
print("heights:", {(s.begin, s.end): h for s, h in pipeline.span_heights(sentence.spans).items()})

config = pipeline.ExperimentConfig(cascade_max_levels=4)
system = pipeline.train_cascade(train, config)
predicted, levels = system.predict(test, return_levels=True)
# the trace shows which original span each collapsed head token stands for
for step in levels[0]:
    print(f"level {step.level}:", {pos: (s.begin, s.end) for pos, s in step.sentence_rewrites.items()})

score = chunk_score(predicted, [s.spans for s in test])
print(f"precision {score.precision:.2f}  recall {score.recall:.2f}  F {score.f_beta:.2f}")
