"""Chunk span encodings.

Converts between sets of chunk spans and the five tag representations
(IOB1, IOB2, IOE1, IOE2 and the open/close bracket pair O+C), and turns
bracket streams back into chunks by shortest-phrase pairing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Union


class TagError(ValueError):
    """A chunk tag outside the alphabet of its scheme."""

    def __init__(self, tag, scheme, position=None):
        self.tag = tag
        self.scheme = scheme
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown {scheme.value} tag {tag!r}{where}")


class TagScheme(enum.Enum):
    IOB1 = "IOB1"
    IOB2 = "IOB2"
    IOE1 = "IOE1"
    IOE2 = "IOE2"
    OC = "O+C"

    @classmethod
    def parse(cls, name: Union[str, "TagScheme"]) -> "TagScheme":
        if isinstance(name, TagScheme):
            return name
        key = str(name).strip().upper().replace("+", "")
        for scheme in cls:
            if scheme.name == key:
                return scheme
        raise ValueError(f"unknown tag scheme {name!r}")

    @property
    def alphabet(self) -> frozenset:
        if self in (TagScheme.IOB1, TagScheme.IOB2):
            return frozenset("IOB")
        if self in (TagScheme.IOE1, TagScheme.IOE2):
            return frozenset("IOE")
        return frozenset((OPEN, NO_OPEN, CLOSE, NO_CLOSE))

    @property
    def is_bracket(self) -> bool:
        return self is TagScheme.OC


TAGGING_SCHEMES = (TagScheme.IOB1, TagScheme.IOB2, TagScheme.IOE1, TagScheme.IOE2)
ALL_SCHEMES = TAGGING_SCHEMES + (TagScheme.OC,)

# Tag strings used for the two bracket streams, in files and as class labels.
OPEN, NO_OPEN = "O-OPEN", "O-NONE"
CLOSE, NO_CLOSE = "C-CLOSE", "C-NONE"


@dataclass(frozen=True, order=True)
class ChunkSpan:
    """One chunk over tokens ``begin..end`` (both inclusive)."""

    begin: int
    end: int
    label: str = "NP"

    def __post_init__(self):
        if self.begin < 0 or self.end < self.begin:
            raise ValueError(f"invalid span ({self.begin}, {self.end})")

    def __len__(self):
        return self.end - self.begin + 1

    def contains(self, other: "ChunkSpan") -> bool:
        return self.begin <= other.begin and other.end <= self.end


Marks = tuple  # tuple of bool, one per token


def _check_spans(spans: Iterable[ChunkSpan], length: int) -> list:
    ordered = sorted(spans)
    for span in ordered:
        if span.end >= length:
            raise ValueError(f"span {span} exceeds sentence length {length}")
    for a, b in zip(ordered, ordered[1:]):
        if b.begin <= a.end:
            raise ValueError(f"overlapping spans {a} and {b}")
    return ordered


def encode(spans: Iterable[ChunkSpan], length: int, scheme):
    """Encode non-overlapping spans as a tag sequence.

    Returns a list of tags for the four tagging schemes, and a pair of
    boolean mark tuples ``(open, close)`` for O+C.
    """
    scheme = TagScheme.parse(scheme)
    ordered = _check_spans(spans, length)
    if scheme is TagScheme.OC:
        open_marks = [False] * length
        close_marks = [False] * length
        for span in ordered:
            open_marks[span.begin] = True
            close_marks[span.end] = True
        return tuple(open_marks), tuple(close_marks)

    tags = ["O"] * length
    starts = {s.begin for s in ordered}
    ends = {s.end for s in ordered}
    for span in ordered:
        for t in range(span.begin, span.end + 1):
            tags[t] = "I"
        if scheme is TagScheme.IOB2 or (
            scheme is TagScheme.IOB1 and span.begin - 1 in ends
        ):
            tags[span.begin] = "B"
        elif scheme is TagScheme.IOE2 or (
            scheme is TagScheme.IOE1 and span.end + 1 in starts
        ):
            tags[span.end] = "E"
    return tags


def _decode_iob(tags, scheme):
    spans = []
    start = None
    for t, tag in enumerate(tags):
        if tag not in ("I", "O", "B"):
            raise TagError(tag, scheme, t)
        if tag == "O":
            if start is not None:
                spans.append(ChunkSpan(start, t - 1))
                start = None
        elif tag == "B":
            if start is not None:
                spans.append(ChunkSpan(start, t - 1))
            start = t
        elif start is None:
            # I without an open chunk starts one
            start = t
    if start is not None:
        spans.append(ChunkSpan(start, len(tags) - 1))
    return spans


def _decode_ioe(tags, scheme):
    spans = []
    start = None
    for t, tag in enumerate(tags):
        if tag not in ("I", "O", "E"):
            raise TagError(tag, scheme, t)
        if tag == "O":
            if start is not None:
                spans.append(ChunkSpan(start, t - 1))
                start = None
            continue
        if start is None:
            start = t
        if tag == "E":
            spans.append(ChunkSpan(start, t))
            start = None
    if start is not None:
        spans.append(ChunkSpan(start, len(tags) - 1))
    return spans


def _as_marks(stream, true_tag, false_tag, scheme):
    marks = []
    for t, value in enumerate(stream):
        if value is True or value == true_tag:
            marks.append(True)
        elif value is False or value == false_tag:
            marks.append(False)
        else:
            raise TagError(value, scheme, t)
    return tuple(marks)


def bracket_marks(open_stream, close_stream):
    """Normalise bracket streams given as booleans or O+C tag strings."""
    return (
        _as_marks(open_stream, OPEN, NO_OPEN, TagScheme.OC),
        _as_marks(close_stream, CLOSE, NO_CLOSE, TagScheme.OC),
    )


def decode(tags, scheme) -> list:
    """Decode a tag sequence into a sorted list of non-overlapping spans.

    Inconsistent sequences (classifier output) are repaired rather than
    rejected: an I, B or E that does not continue an open chunk starts a
    new one; a chunk ends before O, before B, after E and at the end of
    the sentence. For O+C, ``tags`` is the ``(open, close)`` pair and
    decoding is :func:`pair_brackets`.
    """
    scheme = TagScheme.parse(scheme)
    if scheme is TagScheme.OC:
        open_stream, close_stream = tags
        return pair_brackets(*bracket_marks(open_stream, close_stream))
    if scheme in (TagScheme.IOB1, TagScheme.IOB2):
        return _decode_iob(tags, scheme)
    return _decode_ioe(tags, scheme)


def to_brackets(tags, scheme):
    """Open and close mark streams of the (repaired) chunks in ``tags``."""
    scheme = TagScheme.parse(scheme)
    length = len(tags[0]) if scheme is TagScheme.OC else len(tags)
    return encode(decode(tags, scheme), length, TagScheme.OC)


def pair_brackets(open_marks: Sequence[bool], close_marks: Sequence[bool]) -> list:
    """Build chunks from bracket marks, keeping only the shortest phrases.

    A single left-to-right scan: a new open mark replaces any pending one,
    a close mark closes the pending open mark, unmatched marks are dropped.
    """
    if len(open_marks) != len(close_marks):
        raise ValueError(
            f"bracket streams differ in length: {len(open_marks)} != {len(close_marks)}"
        )
    spans = []
    pending = None
    for t, (is_open, is_close) in enumerate(zip(open_marks, close_marks)):
        if is_open:
            pending = t
        if is_close and pending is not None:
            spans.append(ChunkSpan(pending, t))
            pending = None
    return spans


def marks_to_tags(marks: Sequence[bool], side: str) -> list:
    """Render a mark stream as O+C tag strings; ``side`` is 'open' or 'close'."""
    if side == "open":
        return [OPEN if m else NO_OPEN for m in marks]
    if side == "close":
        return [CLOSE if m else NO_CLOSE for m in marks]
    raise ValueError(f"side must be 'open' or 'close', not {side!r}")


def convert(tags, source, target):
    """Re-encode a tag sequence from one scheme into another."""
    source = TagScheme.parse(source)
    length = len(tags[0]) if source is TagScheme.OC else len(tags)
    return encode(decode(tags, source), length, target)
