"""Memory-based learners over categorical features.

IB1-IG stores every training instance and classifies by the classes found
in the ``k`` nearest *distance shells* under an information-gain weighted
overlap metric. IGTree compresses the same instances into a tree that
tests features in descending weight order.

Model file layout (text, UTF-8)::

    chunkvote-model 1 <kind> sha256=<hex digest of the body>
    <body: canonical JSON, sorted keys, no whitespace>

``kind`` is ``ib1ig``, ``igtree`` or a pipeline system kind. Equal models
give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

FORMAT_VERSION = 1
_MAGIC = "chunkvote-model"

# IG values closer to zero than this are rounding noise from H(C) - H(C|f).
_ZERO_WEIGHT = 1e-12


class ModelFormatError(ValueError):
    """A model file that is corrupt, truncated or of the wrong version."""


def _check_arity(instances):
    if not instances:
        raise ValueError("need at least one training instance")
    arity = len(instances[0].features)
    for i, inst in enumerate(instances):
        if len(inst.features) != arity:
            raise ValueError(
                f"instance {i} has {len(inst.features)} features, expected {arity}"
            )
    return arity


def _entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def information_gain_weights(instances, gain_ratio=False) -> np.ndarray:
    """Information gain (bits) of every feature position with respect to the class.

    ``w_f = H(C) - sum_v P(f=v) H(C | f=v)``; with ``gain_ratio`` the gain
    is divided by the split information ``H(f)``.
    """
    arity = _check_arity(instances)
    n = len(instances)
    class_counts = Counter(inst.label for inst in instances)
    h_class = _entropy(sorted(class_counts.values()))
    weights = np.zeros(arity)
    for f in range(arity):
        by_value = defaultdict(Counter)
        for inst in instances:
            by_value[inst.features[f]][inst.label] += 1
        if len(by_value) < 2:
            continue
        conditional = 0.0
        value_sizes = []
        # fixed summation order: weights must not depend on instance order
        for value in sorted(by_value):
            counter = by_value[value]
            size = sum(counter.values())
            value_sizes.append(size)
            conditional += size / n * _entropy(sorted(counter.values()))
        gain = h_class - conditional
        if gain_ratio:
            split = _entropy(value_sizes)
            gain = gain / split if split > 0 else 0.0
        weights[f] = gain if gain > _ZERO_WEIGHT else 0.0
    return weights


def _pick(scores: dict, frequency: dict) -> str:
    """Highest score; ties go to the more frequent class, then the smaller name."""
    return min(scores, key=lambda c: (-scores[c], -frequency.get(c, 0), c))


@dataclass
class MemoryModel:
    """IB1-IG model: deduplicated instance table with multiplicities."""

    weights: np.ndarray
    k: int
    classes: tuple
    class_counts: tuple
    vocab: list  # per feature: {value: code}
    table: np.ndarray  # (m, F) int codes
    labels: np.ndarray  # (m,) class index
    counts: np.ndarray  # (m,) multiplicity
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    kind = "ib1ig"

    @property
    def arity(self) -> int:
        return len(self.weights)

    @property
    def class_prior(self) -> dict:
        return dict(zip(self.classes, self.class_counts))

    @property
    def instances(self) -> list:
        """Stored ``(features, label, multiplicity)`` triples."""
        decode = [{code: value for value, code in v.items()} for v in self.vocab]
        return [
            (tuple(decode[f][c] for f, c in enumerate(row)), self.classes[y], int(m))
            for row, y, m in zip(self.table.tolist(), self.labels.tolist(), self.counts.tolist())
        ]

    def encode(self, features) -> np.ndarray:
        if len(features) != self.arity:
            raise ValueError(f"query has {len(features)} features, model expects {self.arity}")
        return np.array([v.get(x, -1) for v, x in zip(self.vocab, features)], dtype=np.int64)

    def distances(self, features) -> np.ndarray:
        query = self.encode(features)
        dist = np.zeros(len(self.table))
        # sequential accumulation in feature order keeps sums reproducible
        for f in range(self.arity):
            if self.weights[f]:
                dist += self.weights[f] * (self.table[:, f] != query[f])
        return dist

    def classify(self, features):
        return ib1ig_classify(self, features)[0]

    def classify_many(self, rows) -> list:
        return [self.classify(row) for row in rows]

    def to_dict(self) -> dict:
        return {
            "weights": [float(w) for w in self.weights],
            "k": self.k,
            "classes": list(self.classes),
            "class_counts": [int(c) for c in self.class_counts],
            "vocab": [sorted(v, key=v.get) for v in self.vocab],
            "table": self.table.tolist(),
            "labels": self.labels.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, d) -> "MemoryModel":
        arity = len(d["weights"])
        return cls(
            weights=np.array(d["weights"], dtype=float),
            k=int(d["k"]),
            classes=tuple(d["classes"]),
            class_counts=tuple(d["class_counts"]),
            vocab=[{value: code for code, value in enumerate(values)} for values in d["vocab"]],
            table=np.array(d["table"], dtype=np.int64).reshape(-1, arity),
            labels=np.array(d["labels"], dtype=np.int64),
            counts=np.array(d["counts"], dtype=np.int64),
        )


def ib1ig_train(instances, k=3, gain_ratio=False, weights=None) -> MemoryModel:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    arity = _check_arity(instances)
    if weights is None:
        weights = information_gain_weights(instances, gain_ratio=gain_ratio)
    class_freq = Counter(inst.label for inst in instances)
    classes = tuple(sorted(class_freq))
    class_index = {c: i for i, c in enumerate(classes)}
    vocab = [
        {value: code for code, value in enumerate(sorted({inst.features[f] for inst in instances}))}
        for f in range(arity)
    ]
    multiplicity = Counter((inst.features, inst.label) for inst in instances)
    rows = sorted(multiplicity)
    table = np.array(
        [[vocab[f][x] for f, x in enumerate(feats)] for feats, _ in rows], dtype=np.int64
    ).reshape(len(rows), arity)
    return MemoryModel(
        weights=np.asarray(weights, dtype=float),
        k=k,
        classes=classes,
        class_counts=tuple(class_freq[c] for c in classes),
        vocab=vocab,
        table=table,
        labels=np.array([class_index[label] for _, label in rows], dtype=np.int64),
        counts=np.array([multiplicity[r] for r in rows], dtype=np.int64),
    )


def ib1ig_classify(model: MemoryModel, features):
    """Return ``(class, scores)`` for one query.

    Neighbours are all stored items whose distance is among the ``k``
    smallest distinct distance values; scores are multiplicity-weighted
    class counts over those neighbours.
    """
    key = tuple(features)
    cached = model._cache.get(key)
    if cached is not None:
        return cached[0], dict(cached[1])
    dist = model.distances(features)
    shells = np.unique(dist)[: model.k]
    near = dist <= shells[-1]
    totals = np.bincount(model.labels[near], weights=model.counts[near], minlength=len(model.classes))
    scores = {model.classes[c]: int(s) for c, s in enumerate(totals) if s > 0}
    best = _pick(scores, model.class_prior)
    model._cache[key] = (best, scores)
    return best, dict(scores)


class TreeNode:
    __slots__ = ("default", "children")

    def __init__(self, default, children=None):
        self.default = default
        self.children = children or {}

    def to_list(self):
        return [self.default, {v: c.to_list() for v, c in sorted(self.children.items())}]

    @classmethod
    def from_list(cls, data):
        default, children = data
        return cls(default, {v: cls.from_list(c) for v, c in children.items()})

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children.values())


@dataclass
class TreeModel:
    feature_order: tuple
    root: TreeNode
    arity: int

    kind = "igtree"

    def classify(self, features):
        return igtree_classify(self, features)

    def classify_many(self, rows) -> list:
        return [self.classify(row) for row in rows]

    def to_dict(self) -> dict:
        return {"feature_order": list(self.feature_order), "arity": self.arity,
                "root": self.root.to_list()}

    @classmethod
    def from_dict(cls, d) -> "TreeModel":
        return cls(tuple(d["feature_order"]), TreeNode.from_list(d["root"]), int(d["arity"]))


def igtree_build(instances, weights=None) -> TreeModel:
    arity = _check_arity(instances)
    if weights is None:
        weights = information_gain_weights(instances)
    weights = np.asarray(weights, dtype=float)
    if len(weights) != arity:
        raise ValueError(f"{len(weights)} weights for {arity} features")
    order = tuple(sorted(range(arity), key=lambda f: (-weights[f], f)))
    frequency = Counter(inst.label for inst in instances)
    grouped = Counter((inst.features, inst.label) for inst in instances)
    items = sorted(grouped.items())

    def build(items, depth):
        class_counts = Counter()
        for (_, label), count in items:
            class_counts[label] += count
        node = TreeNode(_pick(dict(class_counts), frequency))
        if len(class_counts) == 1 or depth == arity:
            return node
        f = order[depth]
        branches = defaultdict(list)
        for item in items:
            branches[item[0][0][f]].append(item)
        node.children = {value: build(sub, depth + 1) for value, sub in sorted(branches.items())}
        return node

    return TreeModel(order, build(items, 0), arity)


def igtree_classify(tree: TreeModel, features) -> str:
    if len(features) != tree.arity:
        raise ValueError(f"query has {len(features)} features, model expects {tree.arity}")
    node = tree.root
    for f in tree.feature_order:
        child = node.children.get(features[f])
        if child is None:
            break
        node = child
    return node.default


def train(instances, algorithm="ib1ig", k=3, gain_ratio=False):
    if algorithm == "ib1ig":
        return ib1ig_train(instances, k=k, gain_ratio=gain_ratio)
    if algorithm == "igtree":
        return igtree_build(instances, information_gain_weights(instances, gain_ratio))
    raise ValueError(f"unknown learning algorithm {algorithm!r}")


# -- persistence ---------------------------------------------------------

def write_container(kind: str, payload) -> str:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return f"{_MAGIC} {FORMAT_VERSION} {kind} sha256={digest}\n{body}\n"


def read_container(text: str):
    """Return ``(kind, payload)``; raises :class:`ModelFormatError` on any defect."""
    if not text:
        raise ModelFormatError("empty model file")
    header, sep, body = text.partition("\n")
    parts = header.split(" ")
    if len(parts) != 4 or parts[0] != _MAGIC or not parts[3].startswith("sha256="):
        raise ModelFormatError("not a chunkvote model file (bad header)")
    try:
        version = int(parts[1])
    except ValueError:
        raise ModelFormatError(f"bad format version {parts[1]!r}") from None
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version}, expected {FORMAT_VERSION}")
    if not sep or not body.endswith("\n"):
        raise ModelFormatError("model file is truncated")
    body = body[:-1]
    if hashlib.sha256(body.encode("utf-8")).hexdigest() != parts[3][len("sha256="):]:
        raise ModelFormatError("model file is corrupt (checksum mismatch)")
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model body is not valid JSON: {exc}") from None
    return parts[2], payload


_MODEL_KINDS = {"ib1ig": MemoryModel, "igtree": TreeModel}


def model_to_dict(model) -> dict:
    return {"kind": model.kind, "model": model.to_dict()}


def model_from_dict(d):
    try:
        return _MODEL_KINDS[d["kind"]].from_dict(d["model"])
    except KeyError as exc:
        raise ModelFormatError(f"unknown or incomplete model entry: {exc}") from None


def save_model(model) -> str:
    return write_container(model.kind, model.to_dict())


def load_model(text: str):
    kind, payload = read_container(text)
    if kind not in _MODEL_KINDS:
        raise ModelFormatError(f"model kind {kind!r} is not a learner model")
    try:
        return _MODEL_KINDS[kind].from_dict(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"model payload is incomplete: {exc}") from None
