"""Combining aligned per-token outputs of several classifiers.

Voting methods: ``majority``, ``totprecision``, ``tagprecision``,
``precisionrecall`` and ``tagpair``. Stacking trains a second-level
IB1-IG or IGTree learner on the component outputs, optionally with the
part-of-speech tag of the current word as an extra feature.

Weight tables print as tab-separated text (see :func:`format_weights`)::

    # method <name>
    classifier  tag  precision  recall  accuracy
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import learner
from .features import Instance

VOTING_METHODS = ("majority", "totprecision", "tagprecision", "precisionrecall", "tagpair")
STACKING_METHODS = (
    "stack-ib1ig-tags",
    "stack-ib1ig-tagspos",
    "stack-igtree-tags",
    "stack-igtree-tagspos",
)
METHODS = VOTING_METHODS + STACKING_METHODS


def check_method(method: str) -> str:
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown combination method {method!r}; choose from {', '.join(METHODS)}")
    return method


@dataclass(frozen=True)
class OutputStream:
    classifier_id: str
    tags: tuple

    def __post_init__(self):
        object.__setattr__(self, "tags", tuple(self.tags))

    def __len__(self):
        return len(self.tags)


def _check_aligned(outputs, gold=None):
    if not outputs:
        raise ValueError("need at least one output stream")
    length = len(outputs[0])
    for stream in outputs:
        if len(stream) != length:
            raise ValueError(
                f"stream {stream.classifier_id!r} has {len(stream)} tags, expected {length}"
            )
    if gold is not None and len(gold) != length:
        raise ValueError(f"gold has {len(gold)} tags, streams have {length}")
    return length


@dataclass
class VoteWeights:
    method: str
    n_streams: int
    per_classifier: list = field(default_factory=list)
    per_tag_precision: list = field(default_factory=list)  # [i] -> {tag: p}
    per_tag_recall: list = field(default_factory=list)  # [i] -> {tag: r}
    pair_table: dict = field(default_factory=dict)  # (i, j) -> {(x, y): {gold: prob}}
    tag_frequency: dict = field(default_factory=dict)  # gold counts in tuning data
    classifier_ids: tuple = ()

    @classmethod
    def majority(cls, n_streams: int) -> "VoteWeights":
        return cls("majority", n_streams)

    @property
    def tags(self) -> set:
        found = set(self.tag_frequency)
        for table in self.per_tag_precision:
            found.update(table)
        return found


def _rate(num, den) -> float:
    return num / den if den else 0.0


def estimate_weights(tuning_outputs, gold, method="tagprecision") -> VoteWeights:
    """Estimate every weight table from outputs on held-out tuning data.

    All tables are filled regardless of ``method``; ``method`` only records
    which scoring :func:`vote` applies. Undefined rates are 0.
    """
    method = check_method(method)
    if method not in VOTING_METHODS:
        raise ValueError(f"{method!r} is not a voting method")
    if method == "majority":
        raise ValueError("majority voting does not use tuning data")
    _check_aligned(tuning_outputs, gold)
    gold = list(gold)
    gold_counts = Counter(gold)
    weights = VoteWeights(method, len(tuning_outputs), tag_frequency=dict(gold_counts),
                          classifier_ids=tuple(s.classifier_id for s in tuning_outputs))
    for stream in tuning_outputs:
        correct = Counter(t for t, g in zip(stream.tags, gold) if t == g)
        predicted = Counter(stream.tags)
        weights.per_classifier.append(_rate(sum(correct.values()), len(gold)))
        tags = set(predicted) | set(gold_counts)
        weights.per_tag_precision.append({t: _rate(correct[t], predicted[t]) for t in sorted(tags)})
        weights.per_tag_recall.append({t: _rate(correct[t], gold_counts[t]) for t in sorted(tags)})
    for i, j in combinations(range(len(tuning_outputs)), 2):
        seen = defaultdict(Counter)
        for x, y, g in zip(tuning_outputs[i].tags, tuning_outputs[j].tags, gold):
            seen[(x, y)][g] += 1
        weights.pair_table[(i, j)] = {
            ctx: {g: c / sum(counts.values()) for g, c in sorted(counts.items())}
            for ctx, counts in sorted(seen.items())
        }
    return weights


def _scores(outputs, weights: VoteWeights) -> dict:
    method = weights.method
    scores = defaultdict(float)
    if method == "majority":
        for tag in outputs:
            scores[tag] += 1
        return scores
    if method == "totprecision":
        for i, tag in enumerate(outputs):
            scores[tag] += weights.per_classifier[i]
        return scores
    if method == "tagprecision":
        for i, tag in enumerate(outputs):
            scores[tag] += weights.per_tag_precision[i].get(tag, 0.0)
        return scores

    candidates = sorted(weights.tags | set(outputs))
    if method == "precisionrecall":
        for tag in candidates:
            scores[tag] = 0.0
        for i, voted in enumerate(outputs):
            scores[voted] += weights.per_tag_precision[i].get(voted, 0.0)
            against = 1.0 - weights.per_tag_recall[i].get(voted, 0.0)
            for tag in candidates:
                if tag != voted:
                    scores[tag] += against
        return scores
    if method == "tagpair":
        for tag in candidates:
            scores[tag] = 0.0
        for (i, j), table in sorted(weights.pair_table.items()):
            row = table.get((outputs[i], outputs[j]))
            if row is None:
                # unseen pair context: back off to the two tag precisions
                scores[outputs[i]] += weights.per_tag_precision[i].get(outputs[i], 0.0)
                scores[outputs[j]] += weights.per_tag_precision[j].get(outputs[j], 0.0)
            else:
                for tag, p in row.items():
                    scores[tag] += p
        return scores
    raise ValueError(f"{method!r} is not a voting method")


def vote(outputs: Sequence[str], weights: VoteWeights) -> str:
    """Combined tag for one token from the per-stream tags ``outputs``."""
    if len(outputs) != weights.n_streams:
        raise ValueError(f"{len(outputs)} votes for weights estimated on {weights.n_streams} streams")
    scores = _scores(outputs, weights)
    return min(scores, key=lambda t: (-scores[t], -weights.tag_frequency.get(t, 0), t))


def build_stacking_instances(outputs, pos=None, gold=None) -> list:
    """One instance per token: the stream tags, plus the POS tag if given."""
    if not outputs:
        raise ValueError("need at least one output stream")
    length = _check_aligned(outputs, gold)
    if pos is not None and len(pos) != length:
        raise ValueError(f"POS sequence has {len(pos)} tags, streams have {length}")
    instances = []
    for t in range(length):
        feats = tuple(s.tags[t] for s in outputs)
        if pos is not None:
            feats += (pos[t],)
        instances.append(Instance(feats, gold[t] if gold is not None else ""))
    return instances


@dataclass
class Stacker:
    """A trained second-level classifier over component outputs."""

    model: object
    use_pos: bool
    n_streams: int

    def to_dict(self):
        return {"model": learner.model_to_dict(self.model), "use_pos": self.use_pos,
                "n_streams": self.n_streams}

    @classmethod
    def from_dict(cls, d):
        return cls(learner.model_from_dict(d["model"]), bool(d["use_pos"]), int(d["n_streams"]))


def stacking_config(method: str):
    """``(algorithm, use_pos)`` for a stacking method name."""
    _, algorithm, inputs = check_method(method).split("-")
    return algorithm, inputs == "tagspos"


def train_stacker(outputs, gold, method, pos=None, k=3) -> Stacker:
    algorithm, use_pos = stacking_config(method)
    if use_pos and pos is None:
        raise ValueError(f"{method} needs the POS sequence")
    instances = build_stacking_instances(outputs, pos if use_pos else None, gold)
    return Stacker(learner.train(instances, algorithm, k=k), use_pos, len(outputs))


def combine_stream(outputs, method, weights: Optional[VoteWeights] = None,
                   stacker: Optional[Stacker] = None, pos=None,
                   classifier_id="combined") -> OutputStream:
    """Combine aligned streams token by token."""
    method = check_method(method)
    length = _check_aligned(outputs)
    if method in STACKING_METHODS:
        if stacker is None:
            raise ValueError(f"{method} needs a trained stacker")
        if stacker.n_streams != len(outputs):
            raise ValueError(f"stacker expects {stacker.n_streams} streams, got {len(outputs)}")
        if stacker.use_pos and pos is None:
            raise ValueError(f"{method} needs the POS sequence")
        rows = build_stacking_instances(outputs, pos if stacker.use_pos else None)
        tags = stacker.model.classify_many([r.features for r in rows])
        return OutputStream(classifier_id, tags)
    if weights is None:
        if method != "majority":
            raise ValueError(f"{method} needs weights estimated on tuning data")
        weights = VoteWeights.majority(len(outputs))
    if weights.method != method:
        raise ValueError(f"weights were estimated for {weights.method}, not {method}")
    tags = [vote([s.tags[t] for s in outputs], weights) for t in range(length)]
    return OutputStream(classifier_id, tags)


def weights_to_dict(weights: VoteWeights) -> dict:
    return {
        "method": weights.method,
        "n_streams": weights.n_streams,
        "classifier_ids": list(weights.classifier_ids),
        "per_classifier": weights.per_classifier,
        "per_tag_precision": weights.per_tag_precision,
        "per_tag_recall": weights.per_tag_recall,
        "pair_table": [
            [i, j, [[x, y, row] for (x, y), row in table.items()]]
            for (i, j), table in sorted(weights.pair_table.items())
        ],
        "tag_frequency": weights.tag_frequency,
    }


def weights_from_dict(d) -> VoteWeights:
    return VoteWeights(
        method=d["method"],
        n_streams=int(d["n_streams"]),
        classifier_ids=tuple(d["classifier_ids"]),
        per_classifier=list(d["per_classifier"]),
        per_tag_precision=[dict(t) for t in d["per_tag_precision"]],
        per_tag_recall=[dict(t) for t in d["per_tag_recall"]],
        pair_table={
            (i, j): {(x, y): dict(row) for x, y, row in entries}
            for i, j, entries in d["pair_table"]
        },
        tag_frequency=dict(d["tag_frequency"]),
    )


def format_weights(weights: VoteWeights) -> str:
    """Human-readable weight table, one row per classifier and tag."""
    lines = [f"# method {weights.method}", "classifier\ttag\tprecision\trecall\taccuracy"]
    ids = weights.classifier_ids or tuple(str(i) for i in range(weights.n_streams))
    for i, name in enumerate(ids):
        if i >= len(weights.per_tag_precision):
            break
        for tag in sorted(weights.per_tag_precision[i]):
            lines.append(
                f"{name}\t{tag}\t{weights.per_tag_precision[i][tag]:.6f}\t"
                f"{weights.per_tag_recall[i].get(tag, 0.0):.6f}\t{weights.per_classifier[i]:.6f}"
            )
    return "\n".join(lines) + "\n"
