"""Fixed-width feature windows for the two processing stages.

Stage 1 (18 features)::

    word[-4] .. word[+4], pos[-4] .. pos[+4]

Stage 2 (18 features)::

    word[-3] .. word[+3], pos[-3] .. pos[+3], chunk[-2], chunk[-1], chunk[+1], chunk[+2]

where ``chunk`` are first-stage *predicted* tags. Positions outside the
sentence hold a padding value. Padding values contain a space, which a
:class:`~chunkvote.corpus.Token` field never does, so they cannot collide
with real words, tags or each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import chunkrepr
from .chunkrepr import TagScheme

PAD_WORD = "<pad word>"
PAD_POS = "<pad pos>"
PAD_CHUNK = "<pad chunk>"


@dataclass(frozen=True)
class Instance:
    features: tuple
    label: str


@dataclass(frozen=True)
class WindowSpec:
    word_left: int
    word_right: int
    tag_left: int = 0
    tag_right: int = 0

    def __post_init__(self):
        if min(self.word_left, self.word_right, self.tag_left, self.tag_right) < 0:
            raise ValueError("window sizes must be non-negative")

    @property
    def arity(self) -> int:
        return 2 * (self.word_left + 1 + self.word_right) + self.tag_left + self.tag_right


STAGE1 = WindowSpec(4, 4)
STAGE2 = WindowSpec(3, 3, 2, 2)


def window_features(words, tags, t, spec: WindowSpec, chunk_tags=None) -> tuple:
    n = len(words)
    if not 0 <= t < n:
        raise IndexError(f"token index {t} outside sentence of length {n}")
    offsets = range(-spec.word_left, spec.word_right + 1)
    feats = [words[t + d] if 0 <= t + d < n else PAD_WORD for d in offsets]
    feats += [tags[t + d] if 0 <= t + d < n else PAD_POS for d in offsets]
    if spec.tag_left or spec.tag_right:
        if chunk_tags is None or len(chunk_tags) != n:
            raise ValueError("chunk tag context must cover the whole sentence")
        chunk_offsets = list(range(-spec.tag_left, 0)) + list(range(1, spec.tag_right + 1))
        feats += [chunk_tags[t + d] if 0 <= t + d < n else PAD_CHUNK for d in chunk_offsets]
    return tuple(feats)


def stage1_features(sentence, t: int) -> tuple:
    return window_features(sentence.words, sentence.pos, t, STAGE1)


def stage2_features(sentence, stage1_tags, t: int) -> tuple:
    """Stage-2 window; the focus token's own stage-1 tag is not included."""
    if len(stage1_tags) != len(sentence):
        raise ValueError(
            f"stage-1 output has {len(stage1_tags)} tags for {len(sentence)} tokens"
        )
    return window_features(sentence.words, sentence.pos, t, STAGE2, stage1_tags)


def sentence_features(sentence, stage=1, stage1_tags=None) -> list:
    if stage == 1:
        return [stage1_features(sentence, t) for t in range(len(sentence))]
    return [stage2_features(sentence, stage1_tags, t) for t in range(len(sentence))]


def gold_labels(sentence, scheme):
    """Per-token class labels; a pair of (open, close) label lists for O+C."""
    scheme = TagScheme.parse(scheme)
    encoded = chunkrepr.encode(sentence.spans, len(sentence), scheme)
    if scheme.is_bracket:
        return (chunkrepr.marks_to_tags(encoded[0], "open"),
                chunkrepr.marks_to_tags(encoded[1], "close"))
    return encoded


def build_instances(data, scheme, stage=1, stage1_output=None):
    """Training instances for every token of ``data``.

    Returns a list of :class:`Instance` for tagging schemes and a pair
    ``(open_instances, close_instances)`` for O+C. Stage 2 needs
    ``stage1_output``, one predicted tag sequence per sentence, and is only
    defined for the four tagging schemes.
    """
    scheme = TagScheme.parse(scheme)
    if stage not in (1, 2):
        raise ValueError(f"stage must be 1 or 2, not {stage!r}")
    if stage == 2:
        if scheme.is_bracket:
            raise ValueError("the second stage is only defined for tagging schemes")
        if stage1_output is None or len(stage1_output) != len(data):
            raise ValueError("stage 2 needs stage-1 output for every sentence")

    if scheme.is_bracket:
        opens, closes = [], []
        for sentence in data:
            feats = sentence_features(sentence)
            open_labels, close_labels = gold_labels(sentence, scheme)
            opens += [Instance(f, y) for f, y in zip(feats, open_labels)]
            closes += [Instance(f, y) for f, y in zip(feats, close_labels)]
        return opens, closes

    instances = []
    for i, sentence in enumerate(data):
        context = stage1_output[i] if stage == 2 else None
        feats = sentence_features(sentence, stage, context)
        instances += [Instance(f, y) for f, y in zip(feats, gold_labels(sentence, scheme))]
    return instances
