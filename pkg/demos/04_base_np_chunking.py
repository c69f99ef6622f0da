"""
Base NP chunking end to end
===========================

Train five representations on a synthetic corpus, vote, and score.
"""

from chunkvote import corpus, pipeline, synthetic
from chunkvote.evaluation import chi_squared_accuracy_test

data = synthetic.base_corpus(60, seed=3)
train, test = data[:48], data[48:]

config = pipeline.ExperimentConfig(method="majority")
spans, report = pipeline.run_basenp(train, test, config)
print(report.to_text())

# the predicted chunks can be written back out in any scheme
out = pipeline.predictions_dataset(test[:1], spans[:1])
print(corpus.write_column_file(out, "IOB2"))

# is the combination better than the weakest single representation?
n = test.n_tokens
worst = min(report.scheme_accuracies(), key=lambda row: row[1])
combined_open = report.combined_accuracy()[0]
stat, level = chi_squared_accuracy_test(
    round(combined_open * n / 100), n, round(worst[1] * n / 100), n
)
print(f"chi-squared vs {worst[0]}: {stat:.3f} (p < {level})" if level else f"chi-squared {stat:.3f}, not significant")

# small cross-validation run
cv = pipeline.run_crossval(data, pipeline.ExperimentConfig(folds=3))
print(cv.to_keyvalue())
