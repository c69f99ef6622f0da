"""Experiment drivers: base NP chunking with combined representations,
cross-validation and the repeated-chunking cascade for arbitrary NPs."""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from . import chunkrepr, combine, evaluation, learner
from .chunkrepr import ALL_SCHEMES, ChunkSpan, TagScheme
from .combine import OutputStream
from .corpus import Dataset, Sentence, Token, split_folds
from .features import build_instances, sentence_features

log = logging.getLogger(__name__)

HEAD_POS = "NP"


@dataclass(frozen=True)
class ExperimentConfig:
    schemes: tuple = ALL_SCHEMES
    stages: int = 2
    k: int = 3
    method: str = "majority"
    folds: int = 10
    tuning_fraction: float = 0.1
    cascade_max_levels: int = 4
    seed: int = 0
    inner_folds: int = 5
    algorithm: str = "ib1ig"
    gain_ratio: bool = False
    jobs: int = 1
    shuffle_tuning: bool = False
    paired_test: bool = False  # McNemar instead of the unpaired chi-squared in reports

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(TagScheme.parse(s) for s in self.schemes))
        object.__setattr__(self, "method", combine.check_method(self.method))

    def validate(self):
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("schemes must not repeat")
        if self.stages not in (1, 2):
            raise ValueError(f"stages must be 1 or 2, got {self.stages}")
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.folds < 2:
            raise ValueError(f"folds must be at least 2, got {self.folds}")
        if self.inner_folds < 2:
            raise ValueError(f"inner_folds must be at least 2, got {self.inner_folds}")
        if not 0 < self.tuning_fraction <= 0.5:
            raise ValueError(f"tuning_fraction must be in (0, 0.5], got {self.tuning_fraction}")
        if self.cascade_max_levels < 1:
            raise ValueError("cascade_max_levels must be at least 1")
        if self.algorithm not in ("ib1ig", "igtree"):
            raise ValueError(f"unknown learning algorithm {self.algorithm!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        return self


def _learn(instances, config):
    return learner.train(instances, config.algorithm, k=config.k, gain_ratio=config.gain_ratio)


# -- one representation --------------------------------------------------

@dataclass
class SchemeSystem:
    """Trained classifiers for one representation.

    Tagging schemes keep a stage-1 model and, with two stages, a stage-2
    model. O+C keeps one model per bracket side.
    """

    scheme: TagScheme
    models: dict

    @property
    def name(self) -> str:
        return self.scheme.value

    def tag(self, sentence):
        """Raw predicted tags; a pair of tag lists for O+C."""
        feats = sentence_features(sentence)
        if self.scheme.is_bracket:
            return (self.models["open"].classify_many(feats),
                    self.models["close"].classify_many(feats))
        tags = self.models["stage1"].classify_many(feats)
        if "stage2" in self.models:
            tags = self.models["stage2"].classify_many(sentence_features(sentence, 2, tags))
        return tags

    def brackets(self, sentence):
        """Open and close tag streams (O+C tag strings) for one sentence."""
        tags = self.tag(sentence)
        if self.scheme.is_bracket:
            return list(tags[0]), list(tags[1])
        open_marks, close_marks = chunkrepr.to_brackets(tags, self.scheme)
        return (chunkrepr.marks_to_tags(open_marks, "open"),
                chunkrepr.marks_to_tags(close_marks, "close"))

    def to_dict(self):
        return {"scheme": self.scheme.value,
                "models": {k: learner.model_to_dict(m) for k, m in sorted(self.models.items())}}

    @classmethod
    def from_dict(cls, d):
        return cls(TagScheme.parse(d["scheme"]),
                   {k: learner.model_from_dict(m) for k, m in d["models"].items()})


def _stage1_model(train: Dataset, scheme, config):
    return _learn(build_instances(train, scheme, 1), config)


def crossval_stage1_tags(train: Dataset, scheme, config) -> list:
    """Stage-1 predictions for every training sentence, each made by a model
    that did not see that sentence. Falls back to resubstitution when there
    are fewer than two sentences."""
    folds = min(config.inner_folds, len(train))
    if folds < 2:
        model = _stage1_model(train, scheme, config)
        return [model.classify_many(sentence_features(s)) for s in train]
    tags = []
    for fold_train, fold_test in split_folds(train, folds):
        model = _stage1_model(fold_train, scheme, config)
        tags += [model.classify_many(sentence_features(s)) for s in fold_test]
    return tags


def train_scheme(train: Dataset, scheme, config: ExperimentConfig) -> SchemeSystem:
    scheme = TagScheme.parse(scheme)
    if not len(train):
        raise ValueError("empty training data")
    if scheme.is_bracket:
        opens, closes = build_instances(train, scheme, 1)
        return SchemeSystem(scheme, {"open": _learn(opens, config), "close": _learn(closes, config)})
    models = {"stage1": _stage1_model(train, scheme, config)}
    if config.stages == 2:
        context = crossval_stage1_tags(train, scheme, config)
        models["stage2"] = _learn(build_instances(train, scheme, 2, context), config)
    return SchemeSystem(scheme, models)


def _train_scheme_job(args):
    return train_scheme(*args)


def train_components(train: Dataset, config: ExperimentConfig) -> list:
    jobs = [(train, scheme, config) for scheme in config.schemes]
    if config.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, len(jobs))) as pool:
            return list(pool.map(_train_scheme_job, jobs))
    return [_train_scheme_job(job) for job in jobs]


def gold_brackets(data: Dataset):
    """Flattened gold open and close tag streams."""
    opens, closes = [], []
    for sentence in data:
        o, c = chunkrepr.encode(sentence.spans, len(sentence), TagScheme.OC)
        opens += chunkrepr.marks_to_tags(o, "open")
        closes += chunkrepr.marks_to_tags(c, "close")
    return opens, closes


def component_streams(components, data: Dataset):
    """Per-component flattened open and close streams over ``data``."""
    open_streams, close_streams = [], []
    for system in components:
        opens, closes = [], []
        for sentence in data:
            o, c = system.brackets(sentence)
            opens += o
            closes += c
        open_streams.append(OutputStream(system.name, opens))
        close_streams.append(OutputStream(system.name, closes))
    return open_streams, close_streams


def _pos_stream(data: Dataset) -> list:
    return [tok.pos for sentence in data for tok in sentence.tokens]


def _split_spans(open_tags, close_tags, data: Dataset) -> list:
    spans, offset = [], 0
    for sentence in data:
        n = len(sentence)
        o, c = chunkrepr.bracket_marks(open_tags[offset:offset + n], close_tags[offset:offset + n])
        spans.append(chunkrepr.pair_brackets(o, c))
        offset += n
    return spans


# -- combined system -----------------------------------------------------

@dataclass
class BaseNPSystem:
    config: ExperimentConfig
    components: list
    combiners: dict = field(default_factory=dict)  # side -> VoteWeights | Stacker | None

    def predict(self, data: Dataset):
        """Return ``(spans per sentence, open streams, close streams, combined open, combined close)``."""
        open_streams, close_streams = component_streams(self.components, data)
        pos = _pos_stream(data)
        combined = {}
        for side, streams in (("open", open_streams), ("close", close_streams)):
            combiner = self.combiners.get(side)
            if isinstance(combiner, combine.Stacker):
                combined[side] = combine.combine_stream(streams, self.config.method,
                                                        stacker=combiner, pos=pos)
            else:
                combined[side] = combine.combine_stream(streams, self.config.method,
                                                        weights=combiner)
        spans = _split_spans(combined["open"].tags, combined["close"].tags, data)
        return spans, open_streams, close_streams, combined["open"], combined["close"]

    def to_dict(self):
        def pack(c):
            if c is None:
                return None
            if isinstance(c, combine.Stacker):
                return {"stacker": c.to_dict()}
            return {"weights": combine.weights_to_dict(c)}

        cfg = self.config
        return {
            "config": {"schemes": [s.value for s in cfg.schemes], "stages": cfg.stages,
                       "k": cfg.k, "method": cfg.method, "algorithm": cfg.algorithm,
                       "gain_ratio": cfg.gain_ratio},
            "components": [c.to_dict() for c in self.components],
            "combiners": {side: pack(c) for side, c in sorted(self.combiners.items())},
        }

    @classmethod
    def from_dict(cls, d):
        def unpack(c):
            if c is None:
                return None
            if "stacker" in c:
                return combine.Stacker.from_dict(c["stacker"])
            return combine.weights_from_dict(c["weights"])

        config = ExperimentConfig(**{**d["config"], "schemes": tuple(d["config"]["schemes"])})
        return cls(config, [SchemeSystem.from_dict(c) for c in d["components"]],
                   {side: unpack(c) for side, c in d["combiners"].items()})


def _tuning_split(train: Dataset, config: ExperimentConfig):
    """Hold out the last ``tuning_fraction`` of sentences, or a seeded random
    sample of that size with ``shuffle_tuning``."""
    n = len(train)
    n_tune = max(1, round(config.tuning_fraction * n))
    if n_tune >= n:
        raise ValueError(f"cannot hold out tuning data from {n} sentences")
    if not config.shuffle_tuning:
        return train[: n - n_tune], train[n - n_tune:]
    held = set(random.Random(config.seed).sample(range(n), n_tune))
    sents = train.sentences
    return (Dataset(s for i, s in enumerate(sents) if i not in held),
            Dataset(s for i, s in enumerate(sents) if i in held))


def train_basenp(train: Dataset, config: ExperimentConfig) -> BaseNPSystem:
    """Train every configured representation plus the combination step."""
    config.validate()
    if not len(train):
        raise ValueError("empty training data")
    method = config.method
    combiners = {"open": None, "close": None}
    if method in combine.STACKING_METHODS:
        # stacker inputs come from cross-validated component outputs
        folds = min(config.inner_folds, len(train))
        if folds < 2:
            raise ValueError("stacking needs at least 2 training sentences")
        open_streams = [[] for _ in config.schemes]
        close_streams = [[] for _ in config.schemes]
        for fold_train, fold_test in split_folds(train, folds):
            fold_components = train_components(fold_train, config)
            fo, fc = component_streams(fold_components, fold_test)
            for i in range(len(config.schemes)):
                open_streams[i] += fo[i].tags
                close_streams[i] += fc[i].tags
        names = [s.value for s in config.schemes]
        gold_open, gold_close = gold_brackets(train)
        pos = _pos_stream(train)
        for side, streams, gold in (("open", open_streams, gold_open),
                                    ("close", close_streams, gold_close)):
            outputs = [OutputStream(n, t) for n, t in zip(names, streams)]
            combiners[side] = combine.train_stacker(outputs, gold, method, pos=pos, k=config.k)
    elif method != "majority":
        head, tune = _tuning_split(train, config)
        tune_open, tune_close = component_streams(train_components(head, config), tune)
        gold_open, gold_close = gold_brackets(tune)
        combiners["open"] = combine.estimate_weights(tune_open, gold_open, method)
        combiners["close"] = combine.estimate_weights(tune_close, gold_close, method)
    log.info("training %d components on %d sentences", len(config.schemes), len(train))
    return BaseNPSystem(config, train_components(train, config), combiners)


# -- reports -------------------------------------------------------------

@dataclass
class BaseNPReport:
    method: str
    scheme_names: list
    gold_open: list
    gold_close: list
    scheme_open: list  # one tag list per scheme
    scheme_close: list
    combined_open: list
    combined_close: list
    pred_spans: list
    gold_spans: list
    paired_test: bool = False

    @property
    def n_tokens(self) -> int:
        return len(self.gold_open)

    @classmethod
    def merge(cls, reports) -> "BaseNPReport":
        reports = list(reports)
        first = reports[0]
        n = len(first.scheme_names)
        return cls(
            first.method,
            list(first.scheme_names),
            [t for r in reports for t in r.gold_open],
            [t for r in reports for t in r.gold_close],
            [[t for r in reports for t in r.scheme_open[i]] for i in range(n)],
            [[t for r in reports for t in r.scheme_close[i]] for i in range(n)],
            [t for r in reports for t in r.combined_open],
            [t for r in reports for t in r.combined_close],
            [s for r in reports for s in r.pred_spans],
            [s for r in reports for s in r.gold_spans],
            first.paired_test,
        )

    def scheme_accuracies(self) -> list:
        return [
            (name, evaluation.token_accuracy(o, self.gold_open),
             evaluation.token_accuracy(c, self.gold_close))
            for name, o, c in zip(self.scheme_names, self.scheme_open, self.scheme_close)
        ]

    def combined_accuracy(self):
        return (evaluation.token_accuracy(self.combined_open, self.gold_open),
                evaluation.token_accuracy(self.combined_close, self.gold_close))

    def agreement(self):
        if len(self.scheme_names) < 3:
            return None
        return (evaluation.agreement_table(self.scheme_open, self.gold_open),
                evaluation.agreement_table(self.scheme_close, self.gold_close))

    def chunk_score(self):
        return evaluation.chunk_score(self.pred_spans, self.gold_spans)

    def significance(self):
        """Chi-squared of combined vs best single representation, per side.

        Unpaired Pearson test by default, McNemar when ``paired_test`` is set.
        """
        out = {}
        for side, gold, streams, combined in (
            ("open", self.gold_open, self.scheme_open, self.combined_open),
            ("close", self.gold_close, self.scheme_close, self.combined_close),
        ):
            n = len(gold)
            flags = [[a == b for a, b in zip(s, gold)] for s in streams]
            best = max(flags, key=sum)
            mine = [a == b for a, b in zip(combined, gold)]
            if self.paired_test:
                out[side] = evaluation.mcnemar_test(mine, best)
            else:
                out[side] = evaluation.chi_squared_accuracy_test(sum(mine), n, sum(best), n)
        return out

    def to_text(self) -> str:
        lines = [f"tokens: {self.n_tokens}  sentences: {len(self.gold_spans)}", "",
                 f"{'Representation':<24}{'O':>9}{'C':>9}"]
        for name, o, c in self.scheme_accuracies():
            lines.append(f"{name:<24}{o:8.2f}%{c:8.2f}%")
        o, c = self.combined_accuracy()
        lines.append(f"{'Combined (' + self.method + ')':<24}{o:8.2f}%{c:8.2f}%")
        for side, (stat, level) in self.significance().items():
            verdict = f"p<{level:g}" if level else "not significant"
            test = "mcnemar" if self.paired_test else "chi2"
            lines.append(f"{test} combined vs best ({side}): {stat:.3f} {verdict}")
        agreement = self.agreement()
        if agreement:
            lines += ["", evaluation.format_agreement(*agreement).rstrip("\n")]
        score = self.chunk_score()
        lines += ["", f"{'':<24}{'accuracy':<22}{'precision':>10}{'recall':>10}{'F':>8}",
                  f"{'Combined (' + self.method + ')':<24}{f'O:{o:.2f}% C:{c:.2f}%':<22}"
                  f"{score.precision:9.2f}%{score.recall:9.2f}%{score.f_beta:8.2f}"]
        return "\n".join(lines) + "\n"

    def to_keyvalue(self) -> str:
        score = self.chunk_score()
        o, c = self.combined_accuracy()
        items = [("method", self.method), ("tokens", self.n_tokens),
                 ("sentences", len(self.gold_spans))]
        for name, so, sc in self.scheme_accuracies():
            items += [(f"accuracy.{name}.open", f"{so:.6f}"), (f"accuracy.{name}.close", f"{sc:.6f}")]
        items += [("accuracy.combined.open", f"{o:.6f}"), ("accuracy.combined.close", f"{c:.6f}")]
        agreement = self.agreement()
        if agreement:
            cells = ("all_correct", "majority_correct", "minority_correct", "all_wrong")
            for side, table in zip(("open", "close"), agreement):
                items += [(f"agreement.{side}.{cell}", f"{v:.6f}")
                          for cell, v in zip(cells, table.as_tuple())]
        items += [("chunks.gold", score.gold_total), ("chunks.found", score.found_total),
                  ("chunks.correct", score.found_correct),
                  ("precision", f"{score.precision:.6f}"), ("recall", f"{score.recall:.6f}"),
                  ("f1", f"{score.f_beta:.6f}")]
        return "".join(f"{k} = {v}\n" for k, v in items)


def evaluate_system(system: BaseNPSystem, test: Dataset):
    spans, open_streams, close_streams, comb_open, comb_close = system.predict(test)
    gold_open, gold_close = gold_brackets(test)
    report = BaseNPReport(
        system.config.method,
        [s.classifier_id for s in open_streams],
        gold_open, gold_close,
        [list(s.tags) for s in open_streams], [list(s.tags) for s in close_streams],
        list(comb_open.tags), list(comb_close.tags),
        spans, [list(s.spans) for s in test],
        system.config.paired_test,
    )
    return spans, report


def run_basenp(train: Dataset, test: Dataset, config: ExperimentConfig):
    """Train on ``train``, chunk ``test``; return ``(spans per test sentence, report)``."""
    config.validate()
    if not len(train) or not len(test):
        raise ValueError("train and test data must be non-empty")
    return evaluate_system(train_basenp(train, config), test)


def run_crossval(data: Dataset, config: ExperimentConfig) -> BaseNPReport:
    """``config.folds``-fold cross-validation over consecutive blocks of ``data``."""
    config.validate()
    reports = []
    for i, (train, test) in enumerate(split_folds(data, config.folds)):
        log.info("fold %d/%d: %d train, %d test sentences", i + 1, config.folds, len(train), len(test))
        reports.append(run_basenp(train, test, config)[1])
    return BaseNPReport.merge(reports)


def predictions_dataset(data: Dataset, spans) -> Dataset:
    return Dataset(s.with_spans(p) for s, p in zip(data, spans))


# -- arbitrary NPs: repeated base chunking ------------------------------

def head_of_span(sentence: Sentence, span: ChunkSpan) -> int:
    """Presumed head of an NP: its rightmost token."""
    if not 0 <= span.begin <= span.end < len(sentence):
        raise ValueError(f"span ({span.begin}, {span.end}) invalid for sentence of length {len(sentence)}")
    return span.end


@dataclass(frozen=True)
class CascadeLevel:
    """Rewrites made after one level: rewritten position -> original span it stands for."""

    level: int
    sentence_rewrites: dict


def span_heights(spans) -> dict:
    """1 for spans containing no other span, else 1 + the largest contained height."""
    ordered = sorted(set(spans), key=len)
    heights = {}
    for span in ordered:
        inner = [heights[s] for s in heights if s != span and span.contains(s)]
        heights[span] = 1 + max(inner, default=0)
    return heights


def _check_nesting(spans):
    spans = sorted(spans)
    for a in spans:
        for b in spans:
            if a.begin < b.begin <= a.end < b.end:
                raise ValueError(f"crossing spans {a} and {b}")


class _View:
    """A sentence after some chunks were collapsed into head tokens."""

    def __init__(self, sentence: Sentence):
        self.tokens = list(sentence.tokens)
        self.cover = [(t, t) for t in range(len(sentence))]

    def sentence(self, spans=()) -> Sentence:
        return Sentence(self.tokens, spans)

    def to_local(self, span: ChunkSpan) -> Optional[ChunkSpan]:
        starts = {b: i for i, (b, _) in enumerate(self.cover)}
        ends = {e: i for i, (_, e) in enumerate(self.cover)}
        if span.begin in starts and span.end in ends:
            return ChunkSpan(starts[span.begin], ends[span.end], span.label)
        return None

    def to_original(self, span: ChunkSpan) -> ChunkSpan:
        return ChunkSpan(self.cover[span.begin][0], self.cover[span.end][1], span.label)

    def collapse(self, local_spans) -> dict:
        current = self.sentence()
        rewrites = {}
        tokens, cover = [], []
        by_begin = {s.begin: s for s in local_spans}
        t = 0
        while t < len(self.tokens):
            span = by_begin.get(t)
            if span is None:
                tokens.append(self.tokens[t])
                cover.append(self.cover[t])
                t += 1
                continue
            head = head_of_span(current, span)
            rewrites[len(tokens)] = self.to_original(span)
            tokens.append(Token(self.tokens[head].word, HEAD_POS))
            cover.append((self.cover[span.begin][0], self.cover[span.end][1]))
            t = span.end + 1
        self.tokens, self.cover = tokens, cover
        return rewrites


def cascade_training_levels(train: Dataset, max_levels: int) -> list:
    """Per-level training sets: gold spans of height L over sentences whose
    lower-height spans have been collapsed into head tokens."""
    views, heights = [], []
    for sentence in train:
        _check_nesting(sentence.spans)
        views.append(_View(sentence))
        heights.append(span_heights(sentence.spans))
    top = max((h for hs in heights for h in hs.values()), default=0)
    levels = []
    for level in range(1, min(top, max_levels) + 1):
        sentences = []
        for view, hs in zip(views, heights):
            local = [view.to_local(s) for s, h in hs.items() if h == level]
            if any(s is None for s in local):
                raise ValueError("gold spans are not properly nested")
            sentences.append(view.sentence(local))
            view.collapse(local)
        levels.append(Dataset(sentences))
    return levels


@dataclass
class CascadeSystem:
    levels: list  # BaseNPSystem per level
    max_levels: int

    def predict(self, data: Dataset, return_levels=False):
        results, traces = [], []
        for sentence in data:
            view = _View(sentence)
            found, trace = [], []
            for level, system in enumerate(self.levels[: self.max_levels], start=1):
                local = system.predict(Dataset([view.sentence()]))[0][0]
                if not local:
                    break
                found += [view.to_original(s) for s in local]
                trace.append(CascadeLevel(level, view.collapse(local)))
            results.append(sorted(set(found)))
            traces.append(trace)
        return (results, traces) if return_levels else results


def train_cascade(train: Dataset, config: ExperimentConfig) -> CascadeSystem:
    config.validate()
    levels = cascade_training_levels(train, config.cascade_max_levels)
    systems = []
    for level, data in enumerate(levels, start=1):
        if level == 1:
            level_config = config
        else:
            level_config = replace(config, schemes=(TagScheme.OC,), method="majority")
        log.info("cascade level %d: training on %d sentences", level, len(data))
        systems.append(train_basenp(data, level_config))
    return CascadeSystem(systems, config.cascade_max_levels)


def run_cascade(train: Dataset, test: Dataset, config: ExperimentConfig) -> list:
    """Nested NP spans for every test sentence (original token positions)."""
    return train_cascade(train, config).predict(test)
